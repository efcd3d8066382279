#include <algorithm>
#include <set>

#include "exmc/elaborate.hpp"

namespace exmc {

namespace {

using Taint = std::vector<int>;  // local event indices, sorted unique

Taint merge(const Taint& a, const Taint& b) {
  Taint out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct Tainted {
  Value v = 0;
  Taint taint;
};

struct Elaborator {
  const ElabRequest& req;
  const LitmusTest& test;
  const ThreadProgram& prog;
  const ThreadProgram* handler;

  ThreadEventGraph graph;
  std::array<Tainted, kRegBank> regs{};
  Tainted flags_z;
  std::set<int> ctrl_srcs;
  std::optional<int> last_elr_msr;           // local event index
  std::array<std::optional<int>, 4> last_sys_msr;  // Esr, Elr, Vbar, Tpidr
  std::array<Tainted, 4> sys_value{};
  bool masked = false;
  int fdx = 0;
  std::size_t tape_pos = 0;
  int fuel;
  int eoimode;
  std::optional<int> open_excl_loc;
  std::optional<int> open_excl_idx;

  std::optional<ChoiceNeeded> need;
  std::optional<ElabReject> reject;

  explicit Elaborator(const ElabRequest& r)
      : req(r),
        test(*r.test),
        prog(r.test->threads[r.thread]),
        handler(r.test->handlers[r.thread] ? &*r.test->handlers[r.thread] : nullptr),
        fuel(r.fuel) {
    const auto& ti = test.thread_init[r.thread];
    for (const auto& [reg, v] : ti.regs) regs[reg].v = v;
    for (const auto& [reg, loc] : ti.reg_locs)
      regs[reg].v = test.location_addr(test.location_id(loc));
    eoimode = ti.eoimode.value_or(r.config->eoimode);
  }

  bool failed() const { return need || reject; }

  std::optional<Value> take_choice(ChoiceNeeded::Kind kind, LocationId loc) {
    if (tape_pos < req.tape.size()) return req.tape[tape_pos++];
    need = ChoiceNeeded{kind, loc};
    return std::nullopt;
  }

  int push_event(Event e) {
    e.thread = req.thread;
    e.fdx = fdx;
    e.seq = 0;
    if (!graph.events.empty() && graph.events.back().fdx == fdx)
      e.seq = graph.events.back().seq + 1;
    int idx = static_cast<int>(graph.events.size());
    for (int src : ctrl_srcs) graph.ctrl.emplace_back(src, idx);
    graph.events.push_back(std::move(e));
    return idx;
  }

  void add_dep(std::vector<LocalEdge>& rel, const Taint& srcs, int dst) {
    for (int s : srcs) rel.emplace_back(s, dst);
  }

  LocationId loc_of_addr(Value addr) {
    for (std::size_t i = 0; i < test.locations.size(); ++i)
      if (test.location_addr(static_cast<LocationId>(i)) == addr)
        return static_cast<LocationId>(i);
    return -1;
  }

  static int find_label(const ThreadProgram& p, const std::string& label) {
    for (std::size_t i = 0; i < p.code.size(); ++i)
      if (p.code[i].label == label) return static_cast<int>(i);
    return -1;
  }

  Tainted read_operand2(const Instruction& ins) {
    if (ins.has_imm) return {ins.imm, {}};
    return regs[ins.rm >= 0 ? ins.rm : ins.rn];
  }

  /// Runs the handler once; returns false on elaboration failure.
  bool run_handler(ExcCause cause) {
    if (!handler) {
      reject = ElabReject{"exception raised with no handler"};
      return false;
    }
    bool saved_mask = masked;
    masked = true;
    if (!run_block(*handler, 0, /*in_handler=*/true)) return false;
    masked = saved_mask;
    (void)cause;
    return true;
  }

  bool take_interrupt_now() {
    if (masked) {
      reject = ElabReject{"injection inside a masked interval"};
      return false;
    }
    ++fdx;
    Event te;
    te.type = EventType::TakeException;
    te.cause = ExcCause::Irq;
    push_event(te);
    if (!run_handler(ExcCause::Irq)) return false;
    return true;
  }

  /// Consecutive takes scheduled at the labelled instruction. Delivered on
  /// the first arrival only.
  bool deliver_injections_at(const std::string& label) {
    if (label.empty()) return true;
    for (std::size_t i = 0; i < test.injections.size(); ++i) {
      const auto& inj = test.injections[i];
      if (inj.thread != req.thread || inj.label != label || delivered_[i]) continue;
      delivered_[i] = true;
      int count = i < req.injection_counts.size() ? req.injection_counts[i] : 0;
      for (int k = 0; k < count; ++k)
        if (!take_interrupt_now()) return false;
    }
    return true;
  }

  std::vector<bool> delivered_;

  bool run_block(const ThreadProgram& block, int start, bool in_handler) {
    int pc = start;
    while (pc >= 0 && pc < static_cast<int>(block.code.size())) {
      if (--fuel <= 0) {
        reject = ElabReject{"fuel exhausted (diverging program?)"};
        return false;
      }
      const Instruction& ins = block.code[pc];
      if (!in_handler && !deliver_injections_at(ins.label)) return false;
      ++fdx;
      ++pc;
      switch (ins.mnem) {
        case Mnemonic::Nop:
          break;
        case Mnemonic::Mov: {
          if (ins.has_imm)
            regs[ins.rd] = {ins.imm << ins.imm_shift, {}};
          else
            regs[ins.rd] = regs[ins.rn];
          break;
        }
        case Mnemonic::Add:
        case Mnemonic::And:
        case Mnemonic::Eor: {
          Tainted a = regs[ins.rn];
          Tainted b = read_operand2(ins);
          Value v = ins.mnem == Mnemonic::Add ? a.v + b.v
                    : ins.mnem == Mnemonic::And ? (a.v & b.v)
                                                : (a.v ^ b.v);
          regs[ins.rd] = {v, merge(a.taint, b.taint)};
          break;
        }
        case Mnemonic::Cmp: {
          Tainted a = regs[ins.rn];
          Tainted b = read_operand2(ins);
          flags_z = {a.v == b.v ? Value{1} : Value{0}, merge(a.taint, b.taint)};
          break;
        }
        case Mnemonic::B:
          pc = find_label(block, ins.target);
          break;
        case Mnemonic::Bcond: {
          for (int s : flags_z.taint) ctrl_srcs.insert(s);
          bool taken = ins.cond == CondCode::Eq ? flags_z.v != 0 : flags_z.v == 0;
          if (taken) pc = find_label(block, ins.target);
          break;
        }
        case Mnemonic::Cbz:
        case Mnemonic::Cbnz: {
          const Tainted& r = regs[ins.rn];
          for (int s : r.taint) ctrl_srcs.insert(s);
          bool taken = ins.mnem == Mnemonic::Cbz ? r.v == 0 : r.v != 0;
          if (taken) pc = find_label(block, ins.target);
          break;
        }
        case Mnemonic::Ldr:
        case Mnemonic::Ldar:
        case Mnemonic::Ldxr: {
          Tainted addr = regs[ins.rn];
          if (ins.rm >= 0) {
            addr.v += regs[ins.rm].v;
            addr.taint = merge(addr.taint, regs[ins.rm].taint);
          }
          if (ins.fault) {
            if (!emit_fault(addr, in_handler)) return false;
            return true;  // the thread ends at the handler's ERET, no retry
          }
          LocationId loc = loc_of_addr(addr.v);
          if (loc < 0) {
            reject = ElabReject{"read from unmapped address"};
            return false;
          }
          auto v = take_choice(ChoiceNeeded::Kind::MemRead, loc);
          if (!v) return false;
          Event e;
          e.type = EventType::Read;
          e.loc = loc;
          e.value = *v;
          e.acquire = ins.mnem == Mnemonic::Ldar;
          e.exclusive = ins.mnem == Mnemonic::Ldxr;
          int idx = push_event(e);
          add_dep(graph.addr, addr.taint, idx);
          regs[ins.rd] = {*v, {idx}};
          if (ins.mnem == Mnemonic::Ldxr) {
            open_excl_loc = loc;
            open_excl_idx = idx;
          }
          break;
        }
        case Mnemonic::Str:
        case Mnemonic::Stlr: {
          Tainted addr = regs[ins.rn];
          if (ins.rm >= 0) {
            addr.v += regs[ins.rm].v;
            addr.taint = merge(addr.taint, regs[ins.rm].taint);
          }
          if (ins.fault) {
            if (!emit_fault(addr, in_handler)) return false;
            return true;  // the thread ends at the handler's ERET, no retry
          }
          LocationId loc = loc_of_addr(addr.v);
          if (loc < 0) {
            reject = ElabReject{"write to unmapped address"};
            return false;
          }
          Event e;
          e.type = EventType::Write;
          e.loc = loc;
          e.value = regs[ins.rd].v;
          e.release = ins.mnem == Mnemonic::Stlr;
          int idx = push_event(e);
          add_dep(graph.addr, addr.taint, idx);
          add_dep(graph.data, regs[ins.rd].taint, idx);
          break;
        }
        case Mnemonic::Stxr: {
          Tainted addr = regs[ins.rn];
          LocationId loc = loc_of_addr(addr.v);
          if (loc < 0) {
            reject = ElabReject{"write to unmapped address"};
            return false;
          }
          bool can_succeed = open_excl_loc && *open_excl_loc == loc;
          Value outcome = 1;  // fail
          if (can_succeed) {
            auto c = take_choice(ChoiceNeeded::Kind::StxrOutcome, loc);
            if (!c) return false;
            outcome = *c;
          }
          if (outcome == 0) {
            Event e;
            e.type = EventType::Write;
            e.loc = loc;
            e.value = regs[ins.rd].v;
            e.exclusive = true;
            int idx = push_event(e);
            add_dep(graph.addr, addr.taint, idx);
            add_dep(graph.data, regs[ins.rd].taint, idx);
            graph.rmw.emplace_back(*open_excl_idx, idx);
          }
          regs[ins.rm] = {outcome, {}};
          open_excl_loc.reset();
          open_excl_idx.reset();
          break;
        }
        case Mnemonic::Dmb:
        case Mnemonic::Dsb:
        case Mnemonic::Isb: {
          Event e;
          e.type = EventType::Fence;
          e.fence = ins.fence;
          push_event(e);
          break;
        }
        case Mnemonic::Svc: {
          if (in_handler) {
            reject = ElabReject{"nested exception in handler"};
            return false;
          }
          Event te;
          te.type = EventType::TakeException;
          te.cause = ExcCause::Svc;
          push_event(te);
          if (!run_handler(ExcCause::Svc)) return false;
          break;
        }
        case Mnemonic::Eret: {
          if (!in_handler) {
            reject = ElabReject{"ERET outside a handler"};
            return false;
          }
          Event e;
          e.type = EventType::Eret;
          int idx = push_event(e);
          if (last_elr_msr) graph.data.emplace_back(*last_elr_msr, idx);
          return true;
        }
        case Mnemonic::Mrs: {
          if (!emit_mrs(ins)) return false;
          break;
        }
        case Mnemonic::Msr: {
          if (!emit_msr(ins)) return false;
          break;
        }
      }
      if (failed()) return false;
    }
    if (in_handler) {
      reject = ElabReject{"handler fell off the end without ERET"};
      return false;
    }
    return true;
  }

  bool emit_fault(const Tainted& addr, bool in_handler) {
    if (in_handler) {
      reject = ElabReject{"nested exception in handler"};
      return false;
    }
    Event te;
    te.type = EventType::TakeException;
    te.cause = ExcCause::PageFault;
    int idx = push_event(te);
    add_dep(graph.addr, addr.taint, idx);
    // The faulting outcome gates everything after it, like a resolved branch.
    for (int s : addr.taint) ctrl_srcs.insert(s);
    return run_handler(ExcCause::PageFault);
  }

  static int sys_slot(SysReg r) {
    switch (r) {
      case SysReg::Esr: return 0;
      case SysReg::Elr: return 1;
      case SysReg::Vbar: return 2;
      case SysReg::Tpidr: return 3;
      default: return -1;
    }
  }

  bool emit_mrs(const Instruction& ins) {
    switch (ins.sysreg) {
      case SysReg::Iar: {
        auto v = take_choice(ChoiceNeeded::Kind::IarRead, -1);
        if (!v) return false;
        Event e;
        e.type = EventType::Mrs;
        e.reg = SysReg::Iar;
        e.value = *v;
        int idx = push_event(e);
        Event ack;
        ack.type = EventType::Acknowledge;
        ack.reg = SysReg::Iar;
        ack.intid = static_cast<unsigned>(*v);
        ack.induced_by = idx;
        int aidx = push_event(ack);
        graph.iio.emplace_back(idx, aidx);
        regs[ins.rd] = {*v, {idx}};
        return true;
      }
      case SysReg::Esr:
      case SysReg::Elr:
      case SysReg::Vbar:
      case SysReg::Tpidr: {
        int slot = sys_slot(ins.sysreg);
        Event e;
        e.type = EventType::Mrs;
        e.reg = ins.sysreg;
        e.value = sys_value[slot].v;
        int idx = push_event(e);
        if (last_sys_msr[slot]) graph.data.emplace_back(*last_sys_msr[slot], idx);
        regs[ins.rd] = {sys_value[slot].v, {idx}};
        return true;
      }
      default:
        reject = ElabReject{std::string("system register is not readable: ") +
                            sysreg_name(ins.sysreg)};
        return false;
    }
  }

  bool emit_msr(const Instruction& ins) {
    Tainted operand = ins.has_imm ? Tainted{ins.imm, {}} : regs[ins.rn];
    Event e;
    e.type = EventType::Msr;
    e.reg = ins.sysreg;
    e.value = operand.v;

    switch (ins.sysreg) {
      case SysReg::DaifSet: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        masked = true;
        return true;
      }
      case SysReg::DaifClr: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        masked = false;
        return true;
      }
      case SysReg::Sgi1r: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        Event gen;
        gen.type = EventType::GenerateInterrupt;
        gen.reg = SysReg::Sgi1r;
        gen.target_mask = static_cast<std::uint32_t>(operand.v & 0xffff);
        gen.intid = static_cast<unsigned>((operand.v >> 24) & 0xf);
        gen.induced_by = idx;
        int gidx = push_event(gen);
        graph.iio.emplace_back(idx, gidx);
        return true;
      }
      case SysReg::Eoir: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        Event drop;
        drop.type = EventType::DropPriority;
        drop.reg = SysReg::Eoir;
        drop.intid = static_cast<unsigned>(operand.v);
        drop.induced_by = idx;
        int didx = push_event(drop);
        graph.iio.emplace_back(idx, didx);
        if (eoimode == 0) {
          Event deact;
          deact.type = EventType::Deactivate;
          deact.reg = SysReg::Eoir;
          deact.intid = static_cast<unsigned>(operand.v);
          deact.induced_by = idx;
          int xidx = push_event(deact);
          graph.iio.emplace_back(idx, xidx);
        }
        return true;
      }
      case SysReg::Dir: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        if (eoimode == 1) {
          Event deact;
          deact.type = EventType::Deactivate;
          deact.reg = SysReg::Dir;
          deact.intid = static_cast<unsigned>(operand.v);
          deact.induced_by = idx;
          int xidx = push_event(deact);
          graph.iio.emplace_back(idx, xidx);
        } else {
          // Writing DIR with EOImode=0 is constrained unpredictable; flag it
          // rather than invent semantics.
          graph.cu_flagged = true;
        }
        return true;
      }
      case SysReg::Esr:
      case SysReg::Elr:
      case SysReg::Vbar:
      case SysReg::Tpidr: {
        int idx = push_event(e);
        add_dep(graph.data, operand.taint, idx);
        int slot = sys_slot(ins.sysreg);
        sys_value[slot] = operand;
        last_sys_msr[slot] = idx;
        if (ins.sysreg == SysReg::Elr) last_elr_msr = idx;
        return true;
      }
      case SysReg::Iar:
        reject = ElabReject{"IAR is not writable"};
        return false;
    }
    return false;
  }

  ElabOutcome run() {
    delivered_.assign(test.injections.size(), false);
    if (!run_block(prog, 0, /*in_handler=*/false)) {
      if (need) return *need;
      return reject.value_or(ElabReject{"elaboration failed"});
    }
    // A plan that schedules takes at a label this control path never reached
    // does not correspond to any execution.
    for (std::size_t i = 0; i < test.injections.size(); ++i) {
      if (test.injections[i].thread != req.thread) continue;
      int count = i < req.injection_counts.size() ? req.injection_counts[i] : 0;
      if (count > 0 && !delivered_[i])
        return ElabReject{"injection label not reached on this path"};
    }
    graph.thread = req.thread;
    for (int r = 0; r < kRegBank; ++r) graph.final_regs[r] = regs[r].v;
    for (std::size_t i = 0; i < graph.events.size(); ++i)
      graph.events[i].id = static_cast<int>(i);
    return graph;
  }
};

}  // namespace

ElabOutcome elaborate_thread(const ElabRequest& req) {
  Elaborator e(req);
  return e.run();
}

ThreadDeps dependencies(const ThreadEventGraph& graph) {
  return ThreadDeps{graph.addr, graph.data, graph.ctrl};
}

}  // namespace exmc
