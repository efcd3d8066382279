#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace exmc {

/// Error thrown when combining relations over different carriers.
struct CarrierMismatch : std::logic_error {
  CarrierMismatch() : std::logic_error("relation carrier mismatch") {}
};

/// Subset of a dense event-id carrier [0, n).
class EventSet {
 public:
  EventSet() = default;
  explicit EventSet(std::size_t carrier) : n_(carrier), bits_(words(carrier), 0) {}

  std::size_t carrier() const { return n_; }

  void insert(std::size_t e) { bits_[e >> 6] |= (1ull << (e & 63)); }
  void erase(std::size_t e) { bits_[e >> 6] &= ~(1ull << (e & 63)); }
  bool contains(std::size_t e) const { return (bits_[e >> 6] >> (e & 63)) & 1; }

  bool empty() const {
    for (auto w : bits_)
      if (w) return false;
    return true;
  }

  std::size_t size() const;
  std::vector<std::size_t> elements() const;

  EventSet operator|(const EventSet& rhs) const;
  EventSet operator&(const EventSet& rhs) const;
  EventSet operator-(const EventSet& rhs) const;
  bool operator==(const EventSet& rhs) const = default;

  const std::vector<std::uint64_t>& words_ref() const { return bits_; }

 private:
  static std::size_t words(std::size_t n) { return (n + 63) / 64; }
  void check(const EventSet& rhs) const {
    if (n_ != rhs.n_) throw CarrierMismatch{};
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> bits_;

  friend class Relation;
};

/// Finite binary relation over a dense event-id carrier, stored as bitset rows.
/// Value semantics throughout; all operators require equal carriers.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t carrier)
      : n_(carrier), row_words_((carrier + 63) / 64), bits_(carrier * row_words_, 0) {}

  std::size_t carrier() const { return n_; }

  void insert(std::size_t a, std::size_t b) { bits_[a * row_words_ + (b >> 6)] |= 1ull << (b & 63); }
  bool contains(std::size_t a, std::size_t b) const {
    return (bits_[a * row_words_ + (b >> 6)] >> (b & 63)) & 1;
  }

  bool empty() const;
  std::size_t size() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  Relation operator|(const Relation& rhs) const;
  Relation operator&(const Relation& rhs) const;
  Relation operator-(const Relation& rhs) const;
  Relation& operator|=(const Relation& rhs);
  bool operator==(const Relation& rhs) const = default;

  /// Relational composition: {(a,c) | ∃b. (a,b) ∈ this ∧ (b,c) ∈ rhs}.
  Relation compose(const Relation& rhs) const;
  Relation inverse() const;

  /// [S]: the identity restricted to S.
  static Relation identity_on(const EventSet& s);
  static Relation full(std::size_t carrier);

  /// [S_dom]; r; [S_rng]
  Relation restrict(const EventSet& dom, const EventSet& rng) const;
  Relation restrict_dom(const EventSet& dom) const;
  Relation restrict_rng(const EventSet& rng) const;

  /// Least transitive superset (r+).
  Relation transitive_closure() const;

  EventSet domain() const;
  EventSet range() const;

  bool irreflexive() const;
  bool acyclic() const;

  /// A shortest cycle through some node, empty when acyclic. Used for reports.
  std::vector<std::size_t> find_cycle() const;

 private:
  void check(const Relation& rhs) const {
    if (n_ != rhs.n_) throw CarrierMismatch{};
  }
  const std::uint64_t* row(std::size_t a) const { return bits_.data() + a * row_words_; }
  std::uint64_t* row(std::size_t a) { return bits_.data() + a * row_words_; }

  std::size_t n_ = 0;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace exmc
