#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "exmc/config.hpp"
#include "exmc/event.hpp"
#include "exmc/litmus.hpp"

namespace exmc {

/// Combinatorial cap exceeded; never silently truncated.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumLimits {
  std::size_t max_candidates = 500000;
  int max_takes = 2;
  int fuel = 4096;
};

/// One candidate execution: per-thread event sequences made global, plus the
/// existentially chosen witness (rf, co, interrupt).
struct CandidateExecution {
  const LitmusTest* test = nullptr;
  std::vector<Event> events;  // init writes first (thread -1), event id = index

  int nthreads = 0;
  std::vector<std::vector<EventId>> po_order;  // per thread, in-po events in order
  std::vector<int> po_pos;                     // position within the thread, -1 otherwise

  std::vector<EventId> rf_src;  // per event id: source write for reads, -1 otherwise
  std::vector<std::vector<EventId>> co;  // per location: init write then program writes

  std::vector<std::pair<EventId, EventId>> interrupt;  // GenerateInterrupt -> TakeInterrupt

  std::vector<std::pair<EventId, EventId>> addr, data, ctrl, rmw, iio;

  std::vector<std::array<Value, kRegBank>> final_regs;
  std::vector<Value> final_mem;  // per location

  bool cu_flagged = false;
  std::vector<int> injection_counts;

  bool has_generates() const {
    for (const auto& e : events)
      if (e.type == EventType::GenerateInterrupt) return true;
    return false;
  }
};

using CandidateSink = std::function<void(const CandidateExecution&)>;

/// Streams exactly the well-formed, GIC-feasible candidates of the test.
/// Throws ResourceLimit past limits.max_candidates.
void enumerate_candidates(const LitmusTest& test, const ModelConfig& config,
                          const EnumLimits& limits, const CandidateSink& sink);

std::vector<CandidateExecution> collect_candidates(const LitmusTest& test,
                                                   const ModelConfig& config,
                                                   const EnumLimits& limits = {});

bool check_final(const CandidateExecution& cand, const FinalNode& cond);

}  // namespace exmc
