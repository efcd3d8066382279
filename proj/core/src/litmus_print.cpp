#include <sstream>

#include "exmc/litmus.hpp"

namespace exmc {

const char* sysreg_name(SysReg r) {
  switch (r) {
    case SysReg::Esr: return "ESR_EL1";
    case SysReg::Elr: return "ELR_EL1";
    case SysReg::Vbar: return "VBAR_EL1";
    case SysReg::Tpidr: return "TPIDR_EL1";
    case SysReg::Sgi1r: return "ICC_SGI1R_EL1";
    case SysReg::Iar: return "IAR";
    case SysReg::Eoir: return "EOIR";
    case SysReg::Dir: return "DIR";
    case SysReg::DaifSet: return "DAIFSet";
    case SysReg::DaifClr: return "DAIFClr";
  }
  return "?";
}

const char* mnemonic_name(Mnemonic m) {
  switch (m) {
    case Mnemonic::Mov: return "MOV";
    case Mnemonic::Add: return "ADD";
    case Mnemonic::And: return "AND";
    case Mnemonic::Eor: return "EOR";
    case Mnemonic::Cmp: return "CMP";
    case Mnemonic::B: return "B";
    case Mnemonic::Bcond: return "B.cond";
    case Mnemonic::Cbz: return "CBZ";
    case Mnemonic::Cbnz: return "CBNZ";
    case Mnemonic::Ldr: return "LDR";
    case Mnemonic::Str: return "STR";
    case Mnemonic::Ldar: return "LDAR";
    case Mnemonic::Stlr: return "STLR";
    case Mnemonic::Ldxr: return "LDXR";
    case Mnemonic::Stxr: return "STXR";
    case Mnemonic::Dmb: return "DMB";
    case Mnemonic::Dsb: return "DSB";
    case Mnemonic::Isb: return "ISB";
    case Mnemonic::Svc: return "SVC";
    case Mnemonic::Eret: return "ERET";
    case Mnemonic::Nop: return "NOP";
    case Mnemonic::Mrs: return "MRS";
    case Mnemonic::Msr: return "MSR";
  }
  return "?";
}

namespace {

std::string reg_name(int r) { return "X" + std::to_string(r); }

std::string fence_domain(FenceKind f) {
  switch (f) {
    case FenceKind::DmbLd:
    case FenceKind::DsbLd: return "LD";
    case FenceKind::DmbSt:
    case FenceKind::DsbSt: return "ST";
    default: return "SY";
  }
}

std::string mem_operand(const Instruction& i) {
  std::string s = "[" + reg_name(i.rn);
  if (i.rm >= 0) s += ", " + reg_name(i.rm);
  s += "]";
  if (i.fault) s += "!fault";
  return s;
}

std::string format_instruction(const Instruction& i) {
  std::ostringstream out;
  if (!i.label.empty()) out << i.label << ": ";
  switch (i.mnem) {
    case Mnemonic::Mov:
      out << "MOV " << reg_name(i.rd) << ", ";
      if (i.has_imm) {
        out << "#" << i.imm;
        if (i.imm_shift) out << ", LSL #" << i.imm_shift;
      } else {
        out << reg_name(i.rn);
      }
      break;
    case Mnemonic::Add:
    case Mnemonic::And:
    case Mnemonic::Eor:
      out << mnemonic_name(i.mnem) << " " << reg_name(i.rd) << ", " << reg_name(i.rn) << ", ";
      if (i.has_imm)
        out << "#" << i.imm;
      else
        out << reg_name(i.rm);
      break;
    case Mnemonic::Cmp:
      out << "CMP " << reg_name(i.rn) << ", ";
      if (i.has_imm)
        out << "#" << i.imm;
      else
        out << reg_name(i.rm);
      break;
    case Mnemonic::B:
      out << "B " << i.target;
      break;
    case Mnemonic::Bcond:
      out << (i.cond == CondCode::Eq ? "B.EQ " : "B.NE ") << i.target;
      break;
    case Mnemonic::Cbz:
    case Mnemonic::Cbnz:
      out << mnemonic_name(i.mnem) << " " << reg_name(i.rn) << ", " << i.target;
      break;
    case Mnemonic::Ldr:
    case Mnemonic::Ldar:
    case Mnemonic::Ldxr:
    case Mnemonic::Str:
    case Mnemonic::Stlr:
      out << mnemonic_name(i.mnem) << " " << reg_name(i.rd) << ", " << mem_operand(i);
      break;
    case Mnemonic::Stxr:
      out << "STXR " << reg_name(i.rm) << ", " << reg_name(i.rd) << ", " << mem_operand(i);
      break;
    case Mnemonic::Dmb:
    case Mnemonic::Dsb:
      out << mnemonic_name(i.mnem) << " " << fence_domain(i.fence);
      break;
    case Mnemonic::Isb:
      out << "ISB";
      break;
    case Mnemonic::Svc:
      out << "SVC #" << i.imm;
      break;
    case Mnemonic::Eret:
      out << "ERET";
      break;
    case Mnemonic::Nop:
      out << "NOP";
      break;
    case Mnemonic::Mrs:
      out << "MRS " << reg_name(i.rd) << ", " << sysreg_name(i.sysreg);
      break;
    case Mnemonic::Msr:
      out << "MSR " << sysreg_name(i.sysreg) << ", ";
      if (i.has_imm)
        out << "#" << i.imm;
      else
        out << reg_name(i.rn);
      break;
  }
  return out.str();
}

}  // namespace

std::string format_final(const FinalNode& n) {
  switch (n.kind) {
    case FinalNode::Kind::True:
      return "true";
    case FinalNode::Kind::Atom: {
      std::ostringstream out;
      if (n.atom.is_reg)
        out << n.atom.thread << ":" << reg_name(n.atom.reg);
      else
        out << n.atom.loc_name;
      out << "=";
      if (!n.atom.value_loc.empty())
        out << n.atom.value_loc;
      else
        out << n.atom.value;
      return out.str();
    }
    case FinalNode::Kind::Not:
      return "~(" + format_final(n.kids[0]) + ")";
    case FinalNode::Kind::And:
      return "(" + format_final(n.kids[0]) + " /\\ " + format_final(n.kids[1]) + ")";
    case FinalNode::Kind::Or:
      return "(" + format_final(n.kids[0]) + " \\/ " + format_final(n.kids[1]) + ")";
  }
  return "true";
}

std::string pretty_print(const LitmusTest& t) {
  std::ostringstream out;
  out << "name: " << t.name << "\n";
  out << "init:";
  bool first = true;
  auto sep = [&]() -> std::ostringstream& {
    out << (first ? " " : "; ");
    first = false;
    return out;
  };
  for (const auto& loc : t.locations) {
    auto it = t.init_mem.find(loc);
    if (it != t.init_mem.end()) sep() << loc << "=" << it->second;
  }
  for (std::size_t th = 0; th < t.thread_init.size(); ++th) {
    const auto& ti = t.thread_init[th];
    for (const auto& [r, v] : ti.regs) sep() << th << ":" << reg_name(r) << "=" << v;
    for (const auto& [r, loc] : ti.reg_locs) sep() << th << ":" << reg_name(r) << "=" << loc;
    if (ti.pstate_el != 0) sep() << th << ":PSTATE.EL=" << ti.pstate_el;
    if (ti.eoimode) sep() << th << ":EOIMode=" << *ti.eoimode;
  }
  out << "\n";
  for (std::size_t th = 0; th < t.threads.size(); ++th) {
    out << "thread " << th << ":\n";
    for (const auto& i : t.threads[th].code) out << "  " << format_instruction(i) << "\n";
    if (t.handlers[th]) {
      out << "handler " << th << ":\n";
      for (const auto& i : t.handlers[th]->code) out << "  " << format_instruction(i) << "\n";
    }
  }
  for (const auto& inj : t.injections)
    out << "inject " << inj.thread << " at " << inj.label << ": IRQ\n";
  out << "final " << (t.final_forbidden ? "forbidden" : "exists") << ": "
      << format_final(t.final_cond) << "\n";
  if (!t.expect.empty()) {
    out << "@expect";
    for (const auto& [k, v] : t.expect)
      out << " " << k << "="
          << (v == Expectation::Allow ? "allow" : v == Expectation::Forbid ? "forbid" : "unknown");
    out << "\n";
  }
  return out.str();
}

std::string event_brief(const Event& e, const std::vector<std::string>& loc_names) {
  std::ostringstream out;
  auto loc = [&](LocationId id) -> std::string {
    if (id >= 0 && id < static_cast<LocationId>(loc_names.size())) return loc_names[id];
    return "?";
  };
  switch (e.type) {
    case EventType::Read: out << "R " << loc(e.loc) << "=" << e.value; break;
    case EventType::Write: out << "W " << loc(e.loc) << "=" << e.value; break;
    case EventType::Fence:
      switch (e.fence) {
        case FenceKind::DmbLd: out << "DMB.LD"; break;
        case FenceKind::DmbSt: out << "DMB.ST"; break;
        case FenceKind::DmbSy: out << "DMB.SY"; break;
        case FenceKind::DsbLd: out << "DSB.LD"; break;
        case FenceKind::DsbSt: out << "DSB.ST"; break;
        case FenceKind::DsbSy: out << "DSB.SY"; break;
        case FenceKind::Isb: out << "ISB"; break;
      }
      break;
    case EventType::TakeException:
      out << (e.cause == ExcCause::Svc ? "TE.svc"
              : e.cause == ExcCause::PageFault ? "TE.fault" : "TE.irq");
      break;
    case EventType::Eret: out << "ERET"; break;
    case EventType::Msr: out << "MSR(" << sysreg_name(e.reg) << ")"; break;
    case EventType::Mrs: out << "MRS(" << sysreg_name(e.reg) << ")=" << e.value; break;
    case EventType::GenerateInterrupt: out << "GenerateInterrupt#" << e.intid; break;
    case EventType::Acknowledge: out << "Acknowledge#" << e.intid; break;
    case EventType::DropPriority: out << "DropPriority#" << e.intid; break;
    case EventType::Deactivate: out << "Deactivate#" << e.intid; break;
  }
  return out.str();
}

std::vector<Diagnostic> validate_test(const LitmusTest& t) {
  std::vector<Diagnostic> diags;

  auto label_count = [](const ThreadProgram& p, const std::string& label) {
    int n = 0;
    for (const auto& i : p.code)
      if (i.label == label) ++n;
    return n;
  };

  for (const auto& inj : t.injections) {
    if (inj.thread < 0 || inj.thread >= static_cast<int>(t.threads.size())) {
      diags.push_back({inj.line, 0, "injection targets unknown thread"});
      continue;
    }
    int n = label_count(t.threads[inj.thread], inj.label);
    if (n != 1)
      diags.push_back({inj.line, 0,
                       "unknown label: injection label '" + inj.label + "' occurs " +
                           std::to_string(n) + " times in thread " + std::to_string(inj.thread)});
  }

  auto needs_handler = [](const ThreadProgram& p) {
    for (const auto& i : p.code)
      if (i.mnem == Mnemonic::Svc || i.fault) return true;
    return false;
  };
  for (std::size_t th = 0; th < t.threads.size(); ++th) {
    bool need = needs_handler(t.threads[th]);
    for (const auto& inj : t.injections)
      if (inj.thread == static_cast<int>(th)) need = true;
    if (need && !t.handlers[th])
      diags.push_back({0, 0, "missing handler: thread " + std::to_string(th) +
                                 " raises exceptions but declares no handler"});
  }

  // Final condition references only declared registers/locations.
  std::vector<const FinalNode*> stack{&t.final_cond};
  while (!stack.empty()) {
    const FinalNode* n = stack.back();
    stack.pop_back();
    for (const auto& k : n->kids) stack.push_back(&k);
    if (n->kind != FinalNode::Kind::Atom) continue;
    const auto& a = n->atom;
    if (a.is_reg) {
      if (a.thread < 0 || a.thread >= static_cast<int>(t.threads.size()))
        diags.push_back({0, 0, "final condition references unknown thread " +
                                   std::to_string(a.thread)});
      if (a.reg < 0 || a.reg >= kRegBank)
        diags.push_back({0, 0, "final condition references invalid register"});
    } else if (t.location_id(a.loc_name) < 0) {
      diags.push_back({0, 0, "final condition references unknown location " + a.loc_name});
    }
  }

  return diags;
}

}  // namespace exmc
