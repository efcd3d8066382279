#include "exmc/model.hpp"

#include "exmc/gic.hpp"

namespace exmc {

namespace {

Relation from_pairs(std::size_t n, const std::vector<std::pair<EventId, EventId>>& pairs) {
  Relation r(n);
  for (auto [a, b] : pairs) r.insert(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  return r;
}

}  // namespace

DerivedRelations derive(const CandidateExecution& cand, const ModelConfig& config) {
  const std::size_t n = cand.events.size();
  DerivedRelations d;

  d.po = Relation(n);
  d.po_loc = Relation(n);
  for (const auto& order : cand.po_order)
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const Event& a = cand.events[order[i]];
        const Event& b = cand.events[order[j]];
        d.po.insert(a.id, b.id);
        if (a.is_memory_access() && b.is_memory_access() && a.loc == b.loc)
          d.po_loc.insert(a.id, b.id);
      }

  d.rf = Relation(n);
  d.rfi = Relation(n);
  d.rfe = Relation(n);
  for (const Event& e : cand.events) {
    if (!e.is_memory_read()) continue;
    EventId w = cand.rf_src[e.id];
    d.rf.insert(w, e.id);
    if (cand.events[w].thread == e.thread)
      d.rfi.insert(w, e.id);
    else
      d.rfe.insert(w, e.id);
  }

  d.co = Relation(n);
  d.coe = Relation(n);
  for (const auto& order : cand.co)
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        d.co.insert(order[i], order[j]);
        if (cand.events[order[i]].thread != cand.events[order[j]].thread)
          d.coe.insert(order[i], order[j]);
      }

  d.fr = Relation(n);
  d.fre = Relation(n);
  for (const Event& e : cand.events) {
    if (!e.is_memory_read()) continue;
    EventId w = cand.rf_src[e.id];
    for (std::size_t b = 0; b < n; ++b)
      if (d.co.contains(w, b)) {
        d.fr.insert(e.id, b);
        if (cand.events[b].thread != e.thread) d.fre.insert(e.id, b);
      }
  }

  d.addr = from_pairs(n, cand.addr);
  d.data = from_pairs(n, cand.data);
  d.ctrl = from_pairs(n, cand.ctrl);
  d.rmw = from_pairs(n, cand.rmw);
  d.iio = from_pairs(n, cand.iio);

  auto set_of = [&](auto pred) {
    EventSet s(n);
    for (const Event& e : cand.events)
      if (pred(e)) s.insert(e.id);
    return s;
  };
  d.reads = set_of([](const Event& e) { return e.is_memory_read(); });
  d.writes = set_of([](const Event& e) { return e.is_memory_write(); });
  d.isb = set_of([](const Event& e) { return e.type == EventType::Fence && e.fence == FenceKind::Isb; });
  d.te = set_of([](const Event& e) { return e.type == EventType::TakeException; });
  d.te_fault = set_of(
      [](const Event& e) { return e.type == EventType::TakeException && e.cause == ExcCause::PageFault; });
  d.eret = set_of([](const Event& e) { return e.type == EventType::Eret; });
  // Special-purpose register writes (ELR) are self-synchronising and stay out
  // of the context-change set; their ordering comes from dependencies.
  d.msr_ctx = set_of([](const Event& e) { return e.type == EventType::Msr && e.reg != SysReg::Elr; });
  d.async = set_of([](const Event& e) { return e.is_take_interrupt(); });
  d.acq = set_of([](const Event& e) { return e.is_memory_read() && e.acquire; });
  d.acq_pc = set_of([](const Event& e) { return e.is_memory_read() && e.acquire_pc; });
  d.rel = set_of([](const Event& e) { return e.is_memory_write() && e.release; });

  // Barrier classes are upwards-closed: DSB.SY sits in all of them.
  auto fence_set = [&](auto pred) {
    return set_of([&](const Event& e) { return e.type == EventType::Fence && pred(e.fence); });
  };
  d.dmbld = fence_set([](FenceKind k) {
    return k == FenceKind::DmbLd || k == FenceKind::DmbSy || k == FenceKind::DsbLd ||
           k == FenceKind::DsbSy;
  });
  d.dmbst = fence_set([](FenceKind k) {
    return k == FenceKind::DmbSt || k == FenceKind::DmbSy || k == FenceKind::DsbSt ||
           k == FenceKind::DsbSy;
  });
  d.dsb = fence_set([](FenceKind k) { return is_dsb(k); });

  // Context-synchronisation events: ISB always; TE/ERET unless FEAT_ExS
  // disables entry/exit synchronisation.
  d.cse = d.isb;
  if (!(config.feat_exs && !config.eis)) d.cse = d.cse | d.te;
  if (!(config.feat_exs && !config.eos)) d.cse = d.cse | d.eret;

  auto id = [&](const EventSet& s) { return Relation::identity_on(s); };

  // speculative: events possibly executed under unresolved control or address
  // speculation, widened by the SEA variants.
  d.speculative = d.ctrl | d.addr.compose(d.po);
  if (config.sea_r) d.speculative |= id(d.reads).compose(d.po);
  if (config.sea_w) d.speculative |= id(d.writes).compose(d.po);

  d.obs = d.rfe | d.fr | d.co;

  d.dob = d.addr | d.data | d.speculative.compose(id(d.writes)) | d.speculative.compose(id(d.isb)) |
          (d.addr | d.data).compose(d.rfi);

  EventSet rmw_range = d.rmw.range();
  d.aob = d.rmw | id(rmw_range).compose(d.rfi).compose(id(d.acq | d.acq_pc));

  d.bob = id(d.reads).compose(d.po).compose(id(d.dmbld)) |
          id(d.writes).compose(d.po).compose(id(d.dmbst)) |
          id(d.dmbst).compose(d.po).compose(id(d.writes)) |
          id(d.dmbld).compose(d.po).compose(id(d.reads | d.writes)) |
          id(d.rel).compose(d.po).compose(id(d.acq)) |
          id(d.acq | d.acq_pc).compose(d.po).compose(id(d.reads | d.writes)) |
          id(d.reads | d.writes).compose(d.po).compose(id(d.rel)) |
          id(d.dsb).compose(d.po);

  d.ctxob = d.speculative.compose(id(d.msr_ctx | d.cse)) |
            id(d.msr_ctx).compose(d.po).compose(id(d.cse)) | id(d.cse).compose(d.po);

  // Asynchronous exceptions are never taken speculatively, order everything
  // po-later, and are precise: po-earlier writes are in the memory system by
  // the time the take is observable.
  d.asyncob = d.speculative.compose(id(d.async)) | id(d.async).compose(d.po) |
              id(d.writes).compose(d.po).compose(id(d.async));

  d.ets2ob = Relation(n);
  if (config.ets2)
    d.ets2ob = id(d.reads | d.writes).compose(d.po).compose(id(d.te_fault));

  d.gicob = Relation(n);
  if (config.gic_extension) d.gicob = from_pairs(n, gic_ob_extension(cand));

  d.ob = (d.obs | d.dob | d.aob | d.bob | d.ctxob | d.asyncob | d.ets2ob | d.gicob)
             .transitive_closure();
  return d;
}

AxiomReport consistent(const CandidateExecution& cand, const DerivedRelations& d) {
  (void)cand;
  AxiomReport report;

  Relation internal_rel = d.po_loc | d.fr | d.co | d.rf;
  report.internal = internal_rel.acyclic();
  report.external = d.ob.irreflexive();
  report.atomic = (d.rmw & d.fre.compose(d.coe)).empty();

  if (!report.internal) {
    auto cyc = internal_rel.find_cycle();
    report.cycle.assign(cyc.begin(), cyc.end());
  } else if (!report.external) {
    // ob is already closed; recover a concrete cycle from its generators.
    Relation gen = d.obs | d.dob | d.aob | d.bob | d.ctxob | d.asyncob | d.ets2ob | d.gicob;
    auto cyc = gen.find_cycle();
    report.cycle.assign(cyc.begin(), cyc.end());
  } else if (!report.atomic) {
    Relation bad = d.rmw & d.fre.compose(d.coe);
    auto ps = bad.pairs();
    if (!ps.empty()) {
      report.cycle = {static_cast<EventId>(ps[0].first), static_cast<EventId>(ps[0].second)};
    }
  }
  return report;
}

AxiomReport consistent(const CandidateExecution& cand, const ModelConfig& config) {
  return consistent(cand, derive(cand, config));
}

}  // namespace exmc
