#include <algorithm>
#include <map>
#include <set>

#include "exmc/gic.hpp"

namespace exmc {

namespace {

bool dsb_orders_upstream(FenceKind dsb, const Event& up) {
  switch (dsb) {
    case FenceKind::DsbSy:
      return true;
    case FenceKind::DsbSt:
      return up.type == EventType::Write || up.type == EventType::GenerateInterrupt;
    case FenceKind::DsbLd:
      return up.type == EventType::Read || up.type == EventType::Acknowledge;
    default:
      return false;
  }
}

/// po position of a node for DSB purposes: GIC effects sit at their inducing
/// register access.
int anchor_pos(const CandidateExecution& cand, const Event& e) {
  if (e.is_gic_effect()) {
    if (e.induced_by < 0) return -1;
    return cand.po_pos[e.induced_by];
  }
  return cand.po_pos[e.id];
}

}  // namespace

GicProblem build_gic_problem(const CandidateExecution& cand) {
  GicProblem prob;
  std::map<EventId, int> node_of;

  for (const auto& e : cand.events) {
    GicNode n;
    n.event = e.id;
    n.thread = e.thread;
    n.intid = e.intid;
    n.po_anchor = anchor_pos(cand, e);
    switch (e.type) {
      case EventType::GenerateInterrupt:
        n.kind = GicNode::Kind::Generate;
        n.target_mask = e.target_mask;
        break;
      case EventType::Acknowledge:
        n.kind = GicNode::Kind::Acknowledge;
        break;
      case EventType::DropPriority:
        n.kind = GicNode::Kind::DropPriority;
        break;
      case EventType::Deactivate:
        n.kind = GicNode::Kind::Deactivate;
        break;
      case EventType::TakeException:
        if (!e.is_take_interrupt()) continue;
        n.kind = GicNode::Kind::Take;
        break;
      default:
        continue;
    }
    node_of[e.id] = static_cast<int>(prob.nodes.size());
    prob.nodes.push_back(n);
  }

  // Witness sets and take INTIDs.
  std::map<int, int> gen_ordinal;  // node index -> generate ordinal
  int gens = 0;
  for (std::size_t i = 0; i < prob.nodes.size(); ++i)
    if (prob.nodes[i].kind == GicNode::Kind::Generate) gen_ordinal[static_cast<int>(i)] = gens++;
  for (const auto& [g, t] : cand.interrupt) {
    int tn = node_of.at(t);
    int gn = node_of.at(g);
    prob.nodes[tn].witness |= 1u << gen_ordinal.at(gn);
    prob.nodes[tn].intid = prob.nodes[gn].intid;
  }

  prob.before.assign(prob.nodes.size(), 0);
  auto add_before = [&](int a, int b) { prob.before[b] |= 1u << a; };

  // Causes precede their takes.
  for (const auto& [g, t] : cand.interrupt) add_before(node_of.at(g), node_of.at(t));

  for (std::size_t i = 0; i < prob.nodes.size(); ++i) {
    for (std::size_t j = 0; j < prob.nodes.size(); ++j) {
      if (i == j) continue;
      const GicNode& a = prob.nodes[i];
      const GicNode& b = prob.nodes[j];
      if (a.thread != b.thread) continue;
      bool a_take = a.kind == GicNode::Kind::Take;
      bool b_take = b.kind == GicNode::Kind::Take;
      if (a.po_anchor < 0 || b.po_anchor < 0 || a.po_anchor >= b.po_anchor) continue;
      if (a_take) {
        // Nothing po-after an asynchronous take starts before it, so its GIC
        // effects (and later takes) land after the take.
        add_before(static_cast<int>(i), static_cast<int>(j));
        continue;
      }
      (void)b_take;
      // A DSB completes only once prior GIC effects have reached the GIC, so
      // anything po-after the DSB (an effect or a take) sees them landed.
      const Event& ae = cand.events[a.event];
      const auto& po = cand.po_order[a.thread];
      for (int p = a.po_anchor + 1; p < b.po_anchor; ++p) {
        const Event& f = cand.events[po[p]];
        if (f.type == EventType::Fence && is_dsb(f.fence) && dsb_orders_upstream(f.fence, ae)) {
          add_before(static_cast<int>(i), static_cast<int>(j));
          break;
        }
      }
    }
  }
  return prob;
}

namespace {

struct IntidState {
  GicPhase phase = GicPhase::Inactive;
  std::uint32_t episode = 0;  // conflated generates of the pending instance
  std::uint32_t buffer = 0;   // the single buffered extra instance

  bool operator<(const IntidState& o) const {
    return std::tie(phase, episode, buffer) < std::tie(o.phase, o.episode, o.buffer);
  }
};

struct Search {
  const GicProblem& prob;
  int n;
  std::vector<std::pair<int, unsigned>> cells;  // (thread, intid) state cells
  std::map<std::pair<int, unsigned>, int> cell_of;
  std::set<std::pair<std::uint32_t, std::vector<IntidState>>> seen;

  explicit Search(const GicProblem& p) : prob(p), n(static_cast<int>(p.nodes.size())) {
    auto cell = [&](int thread, unsigned intid) {
      auto key = std::make_pair(thread, intid);
      if (!cell_of.count(key)) {
        cell_of[key] = static_cast<int>(cells.size());
        cells.push_back(key);
      }
    };
    for (const auto& nd : prob.nodes) {
      switch (nd.kind) {
        case GicNode::Kind::Generate:
          for (int t = 0; t < 32; ++t)
            if (nd.target_mask & (1u << t)) cell(t, nd.intid);
          break;
        case GicNode::Kind::Take:
          cell(nd.thread, nd.intid);
          break;
        case GicNode::Kind::Acknowledge:
          if (nd.intid != kSpuriousIntid) cell(nd.thread, nd.intid);
          break;
        case GicNode::Kind::DropPriority:
          break;
        case GicNode::Kind::Deactivate:
          cell(nd.thread, nd.intid);
          break;
      }
    }
  }

  bool apply(int i, std::vector<IntidState>& st, std::uint32_t gen_bit) {
    const GicNode& nd = prob.nodes[i];
    switch (nd.kind) {
      case GicNode::Kind::Generate: {
        for (int t = 0; t < 32; ++t) {
          if (!(nd.target_mask & (1u << t))) continue;
          auto it = cell_of.find({t, nd.intid});
          if (it == cell_of.end()) continue;
          IntidState& s = st[it->second];
          switch (s.phase) {
            case GicPhase::Inactive:
              s.phase = GicPhase::Pending;
              s.episode = gen_bit;
              break;
            case GicPhase::Pending:
              s.episode |= gen_bit;  // conflation while pending
              break;
            case GicPhase::Active:
              s.phase = GicPhase::ActiveAndPending;
              s.buffer = gen_bit;
              break;
            case GicPhase::ActiveAndPending:
              s.buffer |= gen_bit;  // conflation into the single buffered instance
              break;
          }
        }
        return true;
      }
      case GicNode::Kind::Take: {
        auto it = cell_of.find({nd.thread, nd.intid});
        if (it == cell_of.end()) return false;
        IntidState& s = st[it->second];
        // Delivered while pending; the take consumes the whole conflated
        // instance, which must be exactly its witness.
        return s.phase == GicPhase::Pending && s.episode == nd.witness && nd.witness != 0;
      }
      case GicNode::Kind::Acknowledge: {
        if (nd.intid == kSpuriousIntid) {
          // A spurious read requires nothing pending on this PE.
          for (std::size_t c = 0; c < cells.size(); ++c)
            if (cells[c].first == nd.thread && st[c].phase == GicPhase::Pending) return false;
          return true;
        }
        auto it = cell_of.find({nd.thread, nd.intid});
        if (it == cell_of.end()) return false;
        IntidState& s = st[it->second];
        if (s.phase != GicPhase::Pending) return false;
        s.phase = GicPhase::Active;
        s.episode = 0;
        return true;
      }
      case GicNode::Kind::DropPriority:
        // Single priority level: the drop has no further effect here.
        return true;
      case GicNode::Kind::Deactivate: {
        auto it = cell_of.find({nd.thread, nd.intid});
        if (it == cell_of.end()) return true;
        IntidState& s = st[it->second];
        if (s.phase == GicPhase::Active) {
          s.phase = GicPhase::Inactive;
        } else if (s.phase == GicPhase::ActiveAndPending) {
          s.phase = GicPhase::Pending;  // immediate re-pend of the buffered instance
          s.episode = s.buffer;
          s.buffer = 0;
        }
        return true;
      }
    }
    return false;
  }

  std::uint32_t gen_bit_of(int i) const {
    int ord = 0;
    for (int k = 0; k < i; ++k)
      if (prob.nodes[k].kind == GicNode::Kind::Generate) ++ord;
    return 1u << ord;
  }

  bool dfs(std::uint32_t done, const std::vector<IntidState>& st) {
    if (done == (n >= 32 ? ~0u : (1u << n) - 1)) return true;
    if (!seen.insert({done, st}).second) return false;
    for (int i = 0; i < n; ++i) {
      if (done & (1u << i)) continue;
      if ((prob.before[i] & ~done) != 0) continue;
      std::vector<IntidState> next = st;
      std::uint32_t gb =
          prob.nodes[i].kind == GicNode::Kind::Generate ? gen_bit_of(i) : 0;
      if (!apply(i, next, gb)) continue;
      if (dfs(done | (1u << i), next)) return true;
    }
    return false;
  }
};

}  // namespace

bool feasible_witness(const CandidateExecution& cand) {
  if (cand.cu_flagged) return true;  // constrained unpredictable: flagged, not constrained
  GicProblem prob = build_gic_problem(cand);
  if (prob.nodes.empty()) return true;
  if (prob.nodes.size() > 28)
    throw ResourceLimit("too many GIC events for feasibility search");
  Search s(prob);
  std::vector<IntidState> st(s.cells.size());
  return s.dfs(0, st);
}

std::vector<std::pair<EventId, EventId>> gic_ob_extension(const CandidateExecution& cand) {
  std::vector<std::pair<EventId, EventId>> out = cand.interrupt;
  for (const auto& [a, b] : cand.iio) out.emplace_back(a, b);

  // DSB edges over po', with GIC events anchored at their register access.
  // DSB.ST orders write-like upstream events, DSB.LD read-like, DSB.SY all.
  for (int t = 0; t < cand.nthreads; ++t) {
    std::vector<EventId> members;
    for (const auto& e : cand.events) {
      if (e.thread != t) continue;
      if (e.is_gic_effect() && e.induced_by < 0) continue;
      members.push_back(e.id);
    }
    for (EventId a : members) {
      const Event& ea = cand.events[a];
      int pa = anchor_pos(cand, ea);
      if (pa < 0) continue;
      for (EventId b : members) {
        if (a == b) continue;
        const Event& eb = cand.events[b];
        if (!ea.is_gic_effect() && !eb.is_gic_effect()) continue;
        int pb = anchor_pos(cand, eb);
        if (pb <= pa) continue;
        const auto& po = cand.po_order[t];
        for (int p = pa + 1; p < pb; ++p) {
          const Event& f = cand.events[po[p]];
          if (f.type == EventType::Fence && is_dsb(f.fence) && dsb_orders_upstream(f.fence, ea)) {
            out.emplace_back(a, b);
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace exmc
