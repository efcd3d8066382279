#include <algorithm>
#include <numeric>
#include <set>

#include "exmc/candidate.hpp"
#include "exmc/elaborate.hpp"
#include "exmc/gic.hpp"

namespace exmc {

namespace {

struct Behaviour {
  ThreadEventGraph graph;
  std::vector<int> plan;  // counts per test injection (entries of other threads zero)
};

struct Pools {
  std::vector<std::set<Value>> mem;
  std::set<Value> intids;
};

std::vector<Value> domain_for(const ChoiceNeeded& need, const Pools& pools) {
  std::vector<Value> dom;
  switch (need.kind) {
    case ChoiceNeeded::Kind::MemRead:
      dom.assign(pools.mem[need.loc].begin(), pools.mem[need.loc].end());
      break;
    case ChoiceNeeded::Kind::IarRead:
      dom.assign(pools.intids.begin(), pools.intids.end());
      dom.push_back(kSpuriousIntid);
      break;
    case ChoiceNeeded::Kind::StxrOutcome:
      dom = {0, 1};
      break;
  }
  return dom;
}

void thread_behaviours(const LitmusTest& test, ThreadId t, const ModelConfig& cfg,
                       const std::vector<int>& plan, const Pools& pools,
                       const EnumLimits& limits, std::vector<Behaviour>& out) {
  std::vector<std::vector<Value>> work{{}};
  while (!work.empty()) {
    std::vector<Value> tape = std::move(work.back());
    work.pop_back();
    ElabRequest req;
    req.test = &test;
    req.thread = t;
    req.config = &cfg;
    req.injection_counts = plan;
    req.tape = tape;
    req.fuel = limits.fuel;
    ElabOutcome outcome = elaborate_thread(req);
    if (auto* need = std::get_if<ChoiceNeeded>(&outcome)) {
      for (Value v : domain_for(*need, pools)) {
        std::vector<Value> ext = tape;
        ext.push_back(v);
        work.push_back(std::move(ext));
      }
    } else if (auto* graph = std::get_if<ThreadEventGraph>(&outcome)) {
      out.push_back(Behaviour{std::move(*graph), plan});
      if (out.size() > limits.max_candidates)
        throw ResourceLimit("per-thread behaviour bound exceeded");
    }
    // Rejected plans/paths yield nothing.
  }
}

/// Injection-count vectors for one thread: each opportunity 0..max_takes,
/// bounded total per thread.
std::vector<std::vector<int>> thread_plans(const LitmusTest& test, ThreadId t,
                                           const EnumLimits& limits) {
  std::vector<int> own;
  for (std::size_t i = 0; i < test.injections.size(); ++i)
    if (test.injections[i].thread == t) own.push_back(static_cast<int>(i));
  std::vector<std::vector<int>> plans{std::vector<int>(test.injections.size(), 0)};
  for (int idx : own) {
    std::vector<std::vector<int>> next;
    for (const auto& base : plans) {
      int used = std::accumulate(base.begin(), base.end(), 0);
      for (int k = 0; k + used <= limits.max_takes; ++k) {
        auto p = base;
        p[idx] = k;
        next.push_back(std::move(p));
      }
    }
    plans = std::move(next);
  }
  return plans;
}

struct Assembler {
  const LitmusTest& test;
  const ModelConfig& cfg;
  const EnumLimits& limits;
  const CandidateSink& sink;
  std::size_t emitted = 0;

  void emit(const CandidateExecution& cand) {
    if (++emitted > limits.max_candidates)
      throw ResourceLimit("candidate bound exceeded (" + std::to_string(limits.max_candidates) +
                          ")");
    sink(cand);
  }

  /// Lays out init writes plus each thread's events and lifts the relations
  /// to global event ids.
  CandidateExecution layout(const std::vector<const Behaviour*>& row) {
    CandidateExecution cand;
    cand.test = &test;
    cand.nthreads = static_cast<int>(test.threads.size());
    int nloc = static_cast<int>(test.locations.size());
    for (int l = 0; l < nloc; ++l) {
      Event w;
      w.id = static_cast<int>(cand.events.size());
      w.thread = -1;
      w.type = EventType::Write;
      w.loc = l;
      w.value = test.init_value(l);
      cand.events.push_back(w);
    }
    cand.po_order.resize(cand.nthreads);
    cand.final_regs.resize(cand.nthreads);
    cand.injection_counts.assign(test.injections.size(), 0);
    for (int t = 0; t < cand.nthreads; ++t) {
      const Behaviour& b = *row[t];
      int base = static_cast<int>(cand.events.size());
      for (const Event& le : b.graph.events) {
        Event ge = le;
        ge.id = base + le.id;
        if (ge.induced_by >= 0) ge.induced_by += base;
        cand.events.push_back(ge);
      }
      auto lift = [&](const std::vector<LocalEdge>& in,
                      std::vector<std::pair<EventId, EventId>>& out) {
        for (auto [a, bb] : in) out.emplace_back(base + a, base + bb);
      };
      lift(b.graph.addr, cand.addr);
      lift(b.graph.data, cand.data);
      lift(b.graph.ctrl, cand.ctrl);
      lift(b.graph.rmw, cand.rmw);
      lift(b.graph.iio, cand.iio);
      cand.final_regs[t] = b.graph.final_regs;
      cand.cu_flagged = cand.cu_flagged || b.graph.cu_flagged;
      for (std::size_t i = 0; i < b.plan.size(); ++i)
        if (test.injections[i].thread == t) cand.injection_counts[i] = b.plan[i];
    }
    cand.po_pos.assign(cand.events.size(), -1);
    for (const Event& e : cand.events) {
      if (e.thread < 0 || !e.in_po()) continue;
      cand.po_pos[e.id] = static_cast<int>(cand.po_order[e.thread].size());
      cand.po_order[e.thread].push_back(e.id);
    }
    return cand;
  }

  void enumerate_witnesses(CandidateExecution& cand) {
    std::vector<EventId> takes, gens;
    for (const Event& e : cand.events) {
      if (e.is_take_interrupt()) takes.push_back(e.id);
      if (e.type == EventType::GenerateInterrupt) gens.push_back(e.id);
    }
    if (gens.empty()) {
      // Environmental interrupts (timer-style); no witness, no GIC machinery.
      finish(cand);
      return;
    }

    // The INTID a handler run observed constrains the take's witness.
    auto observed_intid = [&](EventId take) -> std::optional<Value> {
      const Event& t = cand.events[take];
      const auto& po = cand.po_order[t.thread];
      for (int p = cand.po_pos[take] + 1; p < static_cast<int>(po.size()); ++p) {
        const Event& e = cand.events[po[p]];
        if (e.is_take_interrupt()) break;
        if (e.type == EventType::Mrs && e.reg == SysReg::Iar) return e.value;
      }
      return std::nullopt;
    };

    // Options per take: a nonempty same-INTID generate subset targeting it.
    std::vector<std::vector<std::vector<EventId>>> options(takes.size());
    for (std::size_t ti = 0; ti < takes.size(); ++ti) {
      const Event& t = cand.events[takes[ti]];
      auto seen = observed_intid(takes[ti]);
      std::set<unsigned> intids;
      for (EventId g : gens)
        if (cand.events[g].target_mask & (1u << t.thread)) intids.insert(cand.events[g].intid);
      for (unsigned i : intids) {
        if (seen && *seen != kSpuriousIntid && *seen != i) continue;
        std::vector<EventId> pool;
        for (EventId g : gens)
          if (cand.events[g].intid == i && (cand.events[g].target_mask & (1u << t.thread)))
            pool.push_back(g);
        for (std::uint32_t m = 1; m < (1u << pool.size()); ++m) {
          std::vector<EventId> subset;
          for (std::size_t k = 0; k < pool.size(); ++k)
            if (m & (1u << k)) subset.push_back(pool[k]);
          options[ti].push_back(std::move(subset));
        }
      }
      if (options[ti].empty()) return;  // an unexplainable take: no candidate
    }

    std::vector<std::size_t> pick(takes.size(), 0);
    while (true) {
      cand.interrupt.clear();
      for (std::size_t ti = 0; ti < takes.size(); ++ti) {
        for (EventId g : options[ti][pick[ti]]) cand.interrupt.emplace_back(g, takes[ti]);
        cand.events[takes[ti]].intid =
            cand.events[options[ti][pick[ti]].front()].intid;
      }
      if (admissible(cand, gens) && feasible_witness(cand)) finish(cand);

      std::size_t d = 0;
      while (d < takes.size()) {
        if (++pick[d] < options[d].size()) break;
        pick[d] = 0;
        ++d;
      }
      if (d == takes.size()) break;
    }
  }

  /// Eventual delivery at the quiescent cut: a thread that took interrupts
  /// has drained everything targeted at it; a generate may stay undelivered
  /// only towards threads whose cut lies before any delivery.
  bool admissible(const CandidateExecution& cand, const std::vector<EventId>& gens) {
    for (EventId g : gens) {
      const Event& ge = cand.events[g];
      for (int p = 0; p < cand.nthreads; ++p) {
        if (!(ge.target_mask & (1u << p))) continue;
        bool covered = false;
        for (const auto& [gg, t] : cand.interrupt)
          if (gg == g && cand.events[t].thread == p) covered = true;
        if (covered) continue;
        for (const Event& e : cand.events)
          if (e.thread == p && e.is_take_interrupt()) return false;
      }
    }
    return true;
  }

  void finish(CandidateExecution& cand) {
    cand.final_mem.resize(test.locations.size());
    for (std::size_t l = 0; l < test.locations.size(); ++l)
      cand.final_mem[l] = cand.events[cand.co[l].back()].value;
    emit(cand);
  }

  void run(const std::vector<std::vector<Behaviour>>& per_thread) {
    std::vector<std::size_t> idx(per_thread.size(), 0);
    while (true) {
      std::vector<const Behaviour*> row;
      for (std::size_t t = 0; t < per_thread.size(); ++t) row.push_back(&per_thread[t][idx[t]]);
      assemble(row);
      std::size_t d = 0;
      while (d < per_thread.size()) {
        if (++idx[d] < per_thread[d].size()) break;
        idx[d] = 0;
        ++d;
      }
      if (d == per_thread.size()) break;
    }
  }

  void assemble(const std::vector<const Behaviour*>& row) {
    CandidateExecution base = layout(row);

    // rf: per read, the same-location same-value writes (initial included).
    std::vector<EventId> reads;
    std::vector<std::vector<EventId>> sources;
    for (const Event& e : base.events) {
      if (!e.is_memory_read()) continue;
      std::vector<EventId> src;
      for (const Event& w : base.events)
        if (w.is_memory_write() && w.loc == e.loc && w.value == e.value && w.id != e.id)
          src.push_back(w.id);
      if (src.empty()) return;  // this read value is unjustifiable
      reads.push_back(e.id);
      sources.push_back(std::move(src));
    }

    // co: per location, permutations of the program writes after the init write.
    std::vector<std::vector<EventId>> loc_writes(test.locations.size());
    for (const Event& e : base.events)
      if (e.is_memory_write() && e.thread >= 0) loc_writes[e.loc].push_back(e.id);

    std::vector<std::size_t> rf_pick(reads.size(), 0);
    while (true) {
      base.rf_src.assign(base.events.size(), -1);
      for (std::size_t r = 0; r < reads.size(); ++r)
        base.rf_src[reads[r]] = sources[r][rf_pick[r]];

      enumerate_cos(base, loc_writes, 0);

      std::size_t d = 0;
      while (d < reads.size()) {
        if (++rf_pick[d] < sources[d].size()) break;
        rf_pick[d] = 0;
        ++d;
      }
      if (d == reads.size() || reads.empty()) break;
    }
  }

  void enumerate_cos(CandidateExecution& cand, const std::vector<std::vector<EventId>>& loc_writes,
                     std::size_t loc) {
    if (loc == loc_writes.size()) {
      enumerate_witnesses(cand);
      return;
    }
    std::vector<EventId> order = loc_writes[loc];
    std::sort(order.begin(), order.end());
    do {
      if (cand.co.size() <= loc) cand.co.resize(loc_writes.size());
      cand.co[loc].clear();
      cand.co[loc].push_back(static_cast<EventId>(loc));  // the init write
      for (EventId w : order) cand.co[loc].push_back(w);
      enumerate_cos(cand, loc_writes, loc + 1);
    } while (std::next_permutation(order.begin(), order.end()));
  }
};

}  // namespace

void enumerate_candidates(const LitmusTest& test, const ModelConfig& config,
                          const EnumLimits& limits, const CandidateSink& sink) {
  // Value pools: least fixpoint of storable values over all thread behaviours.
  Pools pools;
  pools.mem.resize(test.locations.size());
  for (std::size_t l = 0; l < test.locations.size(); ++l)
    pools.mem[l].insert(test.init_value(static_cast<LocationId>(l)));

  std::vector<std::vector<std::vector<int>>> plans(test.threads.size());
  for (std::size_t t = 0; t < test.threads.size(); ++t)
    plans[t] = thread_plans(test, static_cast<ThreadId>(t), limits);

  std::vector<std::vector<Behaviour>> per_thread(test.threads.size());
  for (int iter = 0;; ++iter) {
    if (iter > 24) throw ResourceLimit("value-pool fixpoint did not converge");
    for (auto& v : per_thread) v.clear();
    for (std::size_t t = 0; t < test.threads.size(); ++t)
      for (const auto& plan : plans[t])
        thread_behaviours(test, static_cast<ThreadId>(t), config, plan, pools, limits,
                          per_thread[t]);
    bool changed = false;
    for (const auto& behaviours : per_thread)
      for (const auto& b : behaviours)
        for (const Event& e : b.graph.events) {
          if (e.type == EventType::Write && pools.mem[e.loc].insert(e.value).second)
            changed = true;
          if (e.type == EventType::GenerateInterrupt && pools.intids.insert(e.intid).second)
            changed = true;
        }
    if (!changed) break;
  }

  for (const auto& behaviours : per_thread)
    if (behaviours.empty()) return;  // some thread has no legal execution

  Assembler assembler{test, config, limits, sink};
  assembler.run(per_thread);
}

std::vector<CandidateExecution> collect_candidates(const LitmusTest& test,
                                                   const ModelConfig& config,
                                                   const EnumLimits& limits) {
  std::vector<CandidateExecution> out;
  enumerate_candidates(test, config, limits, [&](const CandidateExecution& c) { out.push_back(c); });
  return out;
}

namespace {

bool eval_final(const CandidateExecution& cand, const FinalNode& n) {
  switch (n.kind) {
    case FinalNode::Kind::True:
      return true;
    case FinalNode::Kind::Not:
      return !eval_final(cand, n.kids[0]);
    case FinalNode::Kind::And:
      return eval_final(cand, n.kids[0]) && eval_final(cand, n.kids[1]);
    case FinalNode::Kind::Or:
      return eval_final(cand, n.kids[0]) || eval_final(cand, n.kids[1]);
    case FinalNode::Kind::Atom: {
      const FinalAtom& a = n.atom;
      Value expected = a.value;
      if (a.value_loc_id >= 0) expected = cand.test->location_addr(a.value_loc_id);
      if (a.is_reg) return cand.final_regs[a.thread][a.reg] == expected;
      return cand.final_mem[a.loc] == expected;
    }
  }
  return false;
}

}  // namespace

bool check_final(const CandidateExecution& cand, const FinalNode& cond) {
  return eval_final(cand, cond);
}

}  // namespace exmc
