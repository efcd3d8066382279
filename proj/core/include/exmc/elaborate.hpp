#pragma once

#include <variant>
#include <vector>

#include "exmc/config.hpp"
#include "exmc/event.hpp"
#include "exmc/litmus.hpp"

namespace exmc {

/// Elaboration is a pure function of (program, injection plan, choice tape,
/// config). Dynamic choices (memory read values, IAR values, STXR outcomes)
/// are consumed from the tape in execution order; when the tape runs out the
/// elaborator reports what it needs so the enumerator can branch.
struct ElabRequest {
  const LitmusTest* test = nullptr;
  ThreadId thread = -1;
  const ModelConfig* config = nullptr;
  /// Per test->injections entry: number of consecutive takes at that label.
  std::vector<int> injection_counts;
  std::vector<Value> tape;
  int fuel = 4096;
};

struct ChoiceNeeded {
  enum class Kind { MemRead, IarRead, StxrOutcome } kind{};
  LocationId loc = -1;
};

struct ElabReject {
  std::string reason;
};

using ElabOutcome = std::variant<ThreadEventGraph, ChoiceNeeded, ElabReject>;

ElabOutcome elaborate_thread(const ElabRequest& req);

/// Dependency relations are recorded during elaboration; this just exposes
/// them in the shape the spec names.
struct ThreadDeps {
  std::vector<LocalEdge> addr, data, ctrl;
};
ThreadDeps dependencies(const ThreadEventGraph& graph);

}  // namespace exmc
