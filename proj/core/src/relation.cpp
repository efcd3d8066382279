#include "exmc/relation.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace exmc {

std::size_t EventSet::size() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

std::vector<std::size_t> EventSet::elements() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < n_; ++e)
    if (contains(e)) out.push_back(e);
  return out;
}

EventSet EventSet::operator|(const EventSet& rhs) const {
  check(rhs);
  EventSet out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | rhs.bits_[i];
  return out;
}

EventSet EventSet::operator&(const EventSet& rhs) const {
  check(rhs);
  EventSet out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & rhs.bits_[i];
  return out;
}

EventSet EventSet::operator-(const EventSet& rhs) const {
  check(rhs);
  EventSet out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & ~rhs.bits_[i];
  return out;
}

bool Relation::empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

std::size_t Relation::size() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (contains(a, b)) out.emplace_back(a, b);
  return out;
}

Relation Relation::operator|(const Relation& rhs) const {
  check(rhs);
  Relation out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | rhs.bits_[i];
  return out;
}

Relation Relation::operator&(const Relation& rhs) const {
  check(rhs);
  Relation out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & rhs.bits_[i];
  return out;
}

Relation Relation::operator-(const Relation& rhs) const {
  check(rhs);
  Relation out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & ~rhs.bits_[i];
  return out;
}

Relation& Relation::operator|=(const Relation& rhs) {
  check(rhs);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= rhs.bits_[i];
  return *this;
}

Relation Relation::compose(const Relation& rhs) const {
  check(rhs);
  Relation out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    const std::uint64_t* ra = row(a);
    std::uint64_t* ro = out.row(a);
    for (std::size_t bw = 0; bw < row_words_; ++bw) {
      std::uint64_t w = ra[bw];
      while (w) {
        std::size_t b = bw * 64 + static_cast<std::size_t>(std::countr_zero(w));
        w &= w - 1;
        const std::uint64_t* rb = rhs.row(b);
        for (std::size_t i = 0; i < row_words_; ++i) ro[i] |= rb[i];
      }
    }
  }
  return out;
}

Relation Relation::inverse() const {
  Relation out(n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (contains(a, b)) out.insert(b, a);
  return out;
}

Relation Relation::identity_on(const EventSet& s) {
  Relation out(s.carrier());
  for (std::size_t e = 0; e < s.carrier(); ++e)
    if (s.contains(e)) out.insert(e, e);
  return out;
}

Relation Relation::full(std::size_t carrier) {
  Relation out(carrier);
  for (std::size_t a = 0; a < carrier; ++a)
    for (std::size_t b = 0; b < carrier; ++b) out.insert(a, b);
  return out;
}

Relation Relation::restrict(const EventSet& dom, const EventSet& rng) const {
  if (dom.carrier() != n_ || rng.carrier() != n_) throw CarrierMismatch{};
  Relation out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    if (!dom.contains(a)) continue;
    std::uint64_t* ro = out.row(a);
    const std::uint64_t* ra = row(a);
    for (std::size_t i = 0; i < row_words_; ++i) ro[i] = ra[i] & rng.words_ref()[i];
  }
  return out;
}

Relation Relation::restrict_dom(const EventSet& dom) const {
  EventSet all(n_);
  for (std::size_t e = 0; e < n_; ++e) all.insert(e);
  return restrict(dom, all);
}

Relation Relation::restrict_rng(const EventSet& rng) const {
  EventSet all(n_);
  for (std::size_t e = 0; e < n_; ++e) all.insert(e);
  return restrict(all, rng);
}

Relation Relation::transitive_closure() const {
  // Floyd-Warshall reachability on bitset rows.
  Relation out = *this;
  for (std::size_t k = 0; k < n_; ++k) {
    const std::uint64_t* rk = out.row(k);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!out.contains(i, k)) continue;
      std::uint64_t* ri = out.row(i);
      for (std::size_t w = 0; w < row_words_; ++w) ri[w] |= rk[w];
    }
  }
  return out;
}

EventSet Relation::domain() const {
  EventSet out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    const std::uint64_t* ra = row(a);
    for (std::size_t w = 0; w < row_words_; ++w)
      if (ra[w]) {
        out.insert(a);
        break;
      }
  }
  return out;
}

EventSet Relation::range() const {
  EventSet out(n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (contains(a, b)) out.insert(b);
  return out;
}

bool Relation::irreflexive() const {
  for (std::size_t e = 0; e < n_; ++e)
    if (contains(e, e)) return false;
  return true;
}

bool Relation::acyclic() const { return transitive_closure().irreflexive(); }

std::vector<std::size_t> Relation::find_cycle() const {
  Relation tc = transitive_closure();
  std::size_t best_start = n_;
  for (std::size_t e = 0; e < n_; ++e)
    if (tc.contains(e, e)) {
      best_start = e;
      break;
    }
  if (best_start == n_) return {};

  // BFS from best_start back to itself over the base relation.
  std::vector<std::size_t> parent(n_, n_);
  std::deque<std::size_t> queue{best_start};
  std::vector<bool> seen(n_, false);
  while (!queue.empty()) {
    std::size_t a = queue.front();
    queue.pop_front();
    for (std::size_t b = 0; b < n_; ++b) {
      if (!contains(a, b)) continue;
      if (b == best_start) {
        std::vector<std::size_t> cycle{best_start};
        for (std::size_t c = a; c != best_start; c = parent[c]) cycle.push_back(c);
        if (a == best_start) cycle = {best_start};
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (!seen[b]) {
        seen[b] = true;
        parent[b] = a;
        queue.push_back(b);
      }
    }
  }
  return {best_start};
}

}  // namespace exmc
