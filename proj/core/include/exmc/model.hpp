#pragma once

#include "exmc/candidate.hpp"
#include "exmc/config.hpp"
#include "exmc/relation.hpp"

namespace exmc {

/// The named relations of the model instance, kept around for reporting and
/// for the unit tests that pin individual clauses.
struct DerivedRelations {
  Relation po, po_loc;
  Relation rf, rfi, rfe, co, coe, fr, fre;
  Relation addr, data, ctrl, rmw, iio;
  EventSet reads, writes, isb, te, te_fault, eret, msr_ctx, async, cse;
  EventSet acq, acq_pc, rel, dmbld, dmbst, dsb;
  Relation speculative, obs, dob, aob, bob, ctxob, asyncob, ets2ob, gicob;
  Relation ob;
};

DerivedRelations derive(const CandidateExecution& cand, const ModelConfig& config);

struct AxiomReport {
  bool internal = true;
  bool external = true;
  bool atomic = true;
  std::vector<EventId> cycle;  // witnessing cycle / pair on failure
  bool ok() const { return internal && external && atomic; }
};

AxiomReport consistent(const CandidateExecution& cand, const DerivedRelations& rel);
AxiomReport consistent(const CandidateExecution& cand, const ModelConfig& config);

}  // namespace exmc
