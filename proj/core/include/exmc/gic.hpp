#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "exmc/candidate.hpp"

namespace exmc {

/// Per-PE, per-INTID lifecycle state.
enum class GicPhase : std::uint8_t { Inactive, Pending, Active, ActiveAndPending };

/// One automaton step, tagged with the driving event (or -1 for internal
/// bookkeeping). Exposed for the explicit-state oracle in the tests.
struct GicStep {
  EventId event = -1;
  GicPhase before = GicPhase::Inactive;
  GicPhase after = GicPhase::Inactive;
};

/// Abstract GIC node fed to the feasibility search.
struct GicNode {
  enum class Kind { Generate, Take, Acknowledge, DropPriority, Deactivate } kind{};
  EventId event = -1;
  ThreadId thread = -1;        // PE of the effect / take; source PE for generates
  unsigned intid = 0;          // for Acknowledge: the value read (may be spurious)
  std::uint32_t target_mask = 0;
  std::uint32_t witness = 0;   // takes: bitmask over generate-node indices they cover
  int po_anchor = -1;          // po position of the take / inducing access
};

struct GicProblem {
  std::vector<GicNode> nodes;
  // before[i] = bitmask of nodes that must be linearised before node i.
  std::vector<std::uint32_t> before;
};

/// Builds the feasibility problem for a candidate: the GIC nodes plus the
/// ordering every physical timeline must respect (causes before takes, takes
/// before effects of later instructions, DSB-completion edges).
GicProblem build_gic_problem(const CandidateExecution& cand);

/// True iff some interleaving of the candidate's GIC events and takes drives
/// the per-(PE, INTID) automata legally: takes happen while their INTID is
/// pending with the take's witness matching the pending (conflated) instance,
/// acknowledges latch a pending INTID (or read spurious when nothing is
/// pending), EOIR/DIR deactivate according to EOImode.
bool feasible_witness(const CandidateExecution& cand);

/// Extra ordered-before pairs contributed by the draft SGI extension:
/// the interrupt witness itself, iio, and the DSB edges over po extended with
/// GIC events placed at their inducing register access.
std::vector<std::pair<EventId, EventId>> gic_ob_extension(const CandidateExecution& cand);

}  // namespace exmc
