#include <algorithm>
#include <cctype>
#include <sstream>

#include "exmc/litmus.hpp"

namespace exmc {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

/// Cursor over one source line.
struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
  std::optional<Value> number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && s[pos] == '-') ++pos;  // rejected later; friendlier message
    if (pos + 1 < s.size() && s[pos] == '0' && (s[pos + 1] == 'x' || s[pos + 1] == 'X')) {
      pos += 2;
      while (pos < s.size() && std::isxdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    } else {
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (pos == start) return std::nullopt;
    std::string tok = s.substr(start, pos - start);
    if (tok[0] == '-') return std::nullopt;
    return static_cast<Value>(std::stoull(tok, nullptr, 0));
  }
  int col() const { return static_cast<int>(pos) + 1; }
};

struct Parser {
  LitmusTest test;
  std::vector<Diagnostic> diags;
  // Section being filled: -1 none, otherwise thread/handler index.
  enum class Section { None, Init, Thread, Handler } section = Section::None;
  int section_thread = -1;

  void error(int line, int col, std::string msg) { diags.push_back({line, col, std::move(msg)}); }

  void ensure_thread(int t) {
    if (t < 0) return;
    while (static_cast<int>(test.threads.size()) <= t) {
      test.threads.emplace_back();
      test.handlers.emplace_back(std::nullopt);
      test.thread_init.emplace_back();
    }
  }

  LocationId intern(const std::string& name) {
    for (std::size_t i = 0; i < test.locations.size(); ++i)
      if (test.locations[i] == name) return static_cast<LocationId>(i);
    test.locations.push_back(name);
    return static_cast<LocationId>(test.locations.size() - 1);
  }

  static std::optional<int> parse_reg(const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'X' && tok[0] != 'W')) return std::nullopt;
    for (std::size_t i = 1; i < tok.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
    int n = std::stoi(tok.substr(1));
    if (n < 0 || n >= kRegBank) return std::nullopt;
    return n;
  }

  std::optional<SysReg> parse_sysreg(const std::string& tok, Cursor& c) {
    if (tok == "ESR_EL1") return SysReg::Esr;
    if (tok == "ELR_EL1") return SysReg::Elr;
    if (tok == "VBAR_EL1") return SysReg::Vbar;
    if (tok == "TPIDR_EL1") return SysReg::Tpidr;
    if (tok == "ICC_SGI1R_EL1" || tok == "SGI1R") return SysReg::Sgi1r;
    if (tok == "IAR" || tok == "ICC_IAR1_EL1") return SysReg::Iar;
    if (tok == "EOIR" || tok == "ICC_EOIR1_EL1") return SysReg::Eoir;
    if (tok == "DIR" || tok == "ICC_DIR_EL1") return SysReg::Dir;
    if (tok == "DAIFSet" || tok == "DAIFSET") return SysReg::DaifSet;
    if (tok == "DAIFClr" || tok == "DAIFCLR") return SysReg::DaifClr;
    if (tok.rfind("GICR_IPRIORITYR", 0) == 0 || tok.rfind("ICC_PMR", 0) == 0 ||
        tok.rfind("ICC_BPR", 0) == 0) {
      error(c.line, c.col(), "priority registers are reserved and not modelled: " + tok);
      return std::nullopt;
    }
    error(c.line, c.col(), "unknown system register: " + tok);
    return std::nullopt;
  }

  bool expect_char(Cursor& c, char ch) {
    if (!c.eat(ch)) {
      error(c.line, c.col(), std::string("expected '") + ch + "'");
      return false;
    }
    return true;
  }

  std::optional<int> expect_reg(Cursor& c) {
    std::string tok = c.ident();
    auto r = parse_reg(tok);
    if (!r) error(c.line, c.col(), "expected general register, got '" + tok + "'");
    return r;
  }

  std::optional<Value> expect_imm(Cursor& c) {
    if (!c.eat('#')) {
      error(c.line, c.col(), "expected immediate");
      return std::nullopt;
    }
    auto n = c.number();
    if (!n) error(c.line, c.col(), "malformed immediate");
    return n;
  }

  // [Xn] or [Xn, Xm], optional !fault suffix.
  bool parse_mem_operand(Cursor& c, Instruction& ins) {
    if (!expect_char(c, '[')) return false;
    auto rn = expect_reg(c);
    if (!rn) return false;
    ins.rn = *rn;
    if (c.eat(',')) {
      auto rm = expect_reg(c);
      if (!rm) return false;
      ins.rm = *rm;
    }
    if (!expect_char(c, ']')) return false;
    if (c.eat('!')) {
      std::string suffix = c.ident();
      if (suffix != "fault") {
        error(c.line, c.col(), "unknown access annotation '!" + suffix + "'");
        return false;
      }
      ins.fault = true;
    }
    return true;
  }

  void parse_instruction_line(Cursor& c, ThreadProgram& prog) {
    Instruction ins;
    ins.line = c.line;

    std::string first = c.ident();
    if (first.empty()) {
      error(c.line, c.col(), "expected instruction");
      return;
    }
    if (c.peek(':')) {
      // Either "label:" alone or "label: INSN". SVC immediates use '#', so a
      // ':' directly after the first token always means a label here.
      c.eat(':');
      ins.label = first;
      if (c.at_end()) {
        ins.mnem = Mnemonic::Nop;
        // A bare label sticks to the next instruction instead of becoming a NOP.
        pending_label_ = first;
        pending_label_line_ = c.line;
        return;
      }
      first = c.ident();
    }
    if (!pending_label_.empty()) {
      if (!ins.label.empty())
        error(c.line, c.col(), "two labels for one instruction");
      ins.label = pending_label_;
      pending_label_.clear();
    }

    auto reg2 = [&](bool third_any) {
      auto rd = expect_reg(c);
      if (!rd) return false;
      ins.rd = *rd;
      if (!expect_char(c, ',')) return false;
      auto rn = expect_reg(c);
      if (!rn) return false;
      ins.rn = *rn;
      if (!third_any) return true;
      if (!expect_char(c, ',')) return false;
      if (c.peek('#')) {
        auto imm = expect_imm(c);
        if (!imm) return false;
        ins.has_imm = true;
        ins.imm = *imm;
      } else {
        auto rm = expect_reg(c);
        if (!rm) return false;
        ins.rm = *rm;
      }
      return true;
    };

    if (first == "MOV") {
      ins.mnem = Mnemonic::Mov;
      auto rd = expect_reg(c);
      if (!rd) return;
      ins.rd = *rd;
      if (!expect_char(c, ',')) return;
      if (c.peek('#')) {
        auto imm = expect_imm(c);
        if (!imm) return;
        ins.has_imm = true;
        ins.imm = *imm;
        if (c.eat(',')) {
          std::string lsl = c.ident();
          if (lsl != "LSL") {
            error(c.line, c.col(), "expected LSL");
            return;
          }
          auto sh = expect_imm(c);
          if (!sh) return;
          ins.imm_shift = static_cast<int>(*sh);
        }
      } else {
        auto rn = expect_reg(c);
        if (!rn) return;
        ins.rn = *rn;
      }
    } else if (first == "ADD" || first == "AND" || first == "EOR") {
      ins.mnem = first == "ADD" ? Mnemonic::Add : first == "AND" ? Mnemonic::And : Mnemonic::Eor;
      if (!reg2(true)) return;
    } else if (first == "CMP") {
      ins.mnem = Mnemonic::Cmp;
      auto rn = expect_reg(c);
      if (!rn) return;
      ins.rn = *rn;
      if (!expect_char(c, ',')) return;
      if (c.peek('#')) {
        auto imm = expect_imm(c);
        if (!imm) return;
        ins.has_imm = true;
        ins.imm = *imm;
      } else {
        auto rm = expect_reg(c);
        if (!rm) return;
        ins.rm = *rm;
      }
    } else if (first == "B" || first == "B.EQ" || first == "B.NE") {
      if (first == "B") {
        ins.mnem = Mnemonic::B;
      } else {
        ins.mnem = Mnemonic::Bcond;
        ins.cond = first == "B.EQ" ? CondCode::Eq : CondCode::Ne;
      }
      ins.target = c.ident();
      if (ins.target.empty()) error(c.line, c.col(), "expected branch target label");
    } else if (first == "CBZ" || first == "CBNZ") {
      ins.mnem = first == "CBZ" ? Mnemonic::Cbz : Mnemonic::Cbnz;
      auto rn = expect_reg(c);
      if (!rn) return;
      ins.rn = *rn;
      if (!expect_char(c, ',')) return;
      ins.target = c.ident();
      if (ins.target.empty()) error(c.line, c.col(), "expected branch target label");
    } else if (first == "LDR" || first == "LDAR" || first == "LDXR") {
      ins.mnem = first == "LDR" ? Mnemonic::Ldr : first == "LDAR" ? Mnemonic::Ldar : Mnemonic::Ldxr;
      auto rd = expect_reg(c);
      if (!rd) return;
      ins.rd = *rd;
      if (!expect_char(c, ',')) return;
      if (!parse_mem_operand(c, ins)) return;
    } else if (first == "STR" || first == "STLR") {
      ins.mnem = first == "STR" ? Mnemonic::Str : Mnemonic::Stlr;
      auto rd = expect_reg(c);
      if (!rd) return;
      ins.rd = *rd;  // value source
      if (!expect_char(c, ',')) return;
      if (!parse_mem_operand(c, ins)) return;
    } else if (first == "STXR") {
      ins.mnem = Mnemonic::Stxr;
      auto rs = expect_reg(c);  // status destination
      if (!rs) return;
      ins.rm = *rs;
      if (!expect_char(c, ',')) return;
      auto rt = expect_reg(c);
      if (!rt) return;
      ins.rd = *rt;
      if (!expect_char(c, ',')) return;
      if (!parse_mem_operand(c, ins)) return;
    } else if (first == "DMB" || first == "DSB") {
      ins.mnem = first == "DMB" ? Mnemonic::Dmb : Mnemonic::Dsb;
      std::string kind = c.ident();
      bool dmb = first == "DMB";
      if (kind == "LD")
        ins.fence = dmb ? FenceKind::DmbLd : FenceKind::DsbLd;
      else if (kind == "ST")
        ins.fence = dmb ? FenceKind::DmbSt : FenceKind::DsbSt;
      else if (kind == "SY")
        ins.fence = dmb ? FenceKind::DmbSy : FenceKind::DsbSy;
      else {
        error(c.line, c.col(), "barrier domain must be LD, ST or SY");
        return;
      }
    } else if (first == "ISB") {
      ins.mnem = Mnemonic::Isb;
      ins.fence = FenceKind::Isb;
    } else if (first == "SVC") {
      ins.mnem = Mnemonic::Svc;
      auto imm = expect_imm(c);
      if (!imm) return;
      ins.has_imm = true;
      ins.imm = *imm;
    } else if (first == "ERET") {
      ins.mnem = Mnemonic::Eret;
    } else if (first == "NOP") {
      ins.mnem = Mnemonic::Nop;
    } else if (first == "MRS") {
      ins.mnem = Mnemonic::Mrs;
      auto rd = expect_reg(c);
      if (!rd) return;
      ins.rd = *rd;
      if (!expect_char(c, ',')) return;
      auto sr = parse_sysreg(c.ident(), c);
      if (!sr) return;
      ins.sysreg = *sr;
    } else if (first == "MSR") {
      ins.mnem = Mnemonic::Msr;
      auto sr = parse_sysreg(c.ident(), c);
      if (!sr) return;
      ins.sysreg = *sr;
      if (!expect_char(c, ',')) return;
      if (c.peek('#')) {
        auto imm = expect_imm(c);
        if (!imm) return;
        ins.has_imm = true;
        ins.imm = *imm;
      } else {
        auto rn = expect_reg(c);
        if (!rn) return;
        ins.rn = *rn;
      }
    } else {
      error(c.line, c.col(), "unknown mnemonic '" + first + "'");
      return;
    }

    if (!c.at_end()) error(c.line, c.col(), "trailing junk after instruction");
    prog.code.push_back(std::move(ins));
  }

  void parse_init_entry(Cursor& c) {
    c.skip_ws();
    if (c.at_end()) return;
    // Either "N:<field>=value" or "<loc>=value".
    auto num = c.number();
    if (num && c.eat(':')) {
      int t = static_cast<int>(*num);
      ensure_thread(t);
      std::string field = c.ident();
      if (!expect_char(c, '=')) return;
      if (field == "PSTATE.EL") {
        auto v = c.number();
        if (!v || (*v != 0 && *v != 1)) {
          error(c.line, c.col(), "PSTATE.EL must be 0 or 1");
          return;
        }
        test.thread_init[t].pstate_el = static_cast<int>(*v);
      } else if (field == "EOIMode" || field == "EOIMODE") {
        auto v = c.number();
        if (!v || (*v != 0 && *v != 1)) {
          error(c.line, c.col(), "EOIMode must be 0 or 1");
          return;
        }
        test.thread_init[t].eoimode = static_cast<int>(*v);
      } else if (auto r = parse_reg(field)) {
        auto v = c.number();
        if (v) {
          test.thread_init[t].regs[*r] = *v;
        } else {
          std::string loc = c.ident();
          if (loc.empty()) {
            error(c.line, c.col(), "expected value or location name");
            return;
          }
          intern(loc);
          test.thread_init[t].reg_locs[*r] = loc;
        }
      } else {
        error(c.line, c.col(), "unknown init field '" + field + "'");
      }
    } else if (!num) {
      std::string loc = c.ident();
      if (loc.empty()) {
        error(c.line, c.col(), "malformed init entry");
        return;
      }
      if (!expect_char(c, '=')) return;
      auto v = c.number();
      if (!v) {
        error(c.line, c.col(), "memory init must be a number");
        return;
      }
      intern(loc);
      test.init_mem[loc] = *v;
    } else {
      error(c.line, c.col(), "malformed init entry");
    }
  }

  // expr := term ( \/ term )* ; term := factor ( /\ factor )* ;
  // factor := ~ factor | ( expr ) | atom | true
  std::optional<FinalNode> parse_final_expr(Cursor& c) {
    auto term = parse_final_term(c);
    if (!term) return std::nullopt;
    FinalNode node = std::move(*term);
    while (true) {
      c.skip_ws();
      if (c.pos + 1 < c.s.size() && c.s[c.pos] == '\\' && c.s[c.pos + 1] == '/') {
        c.pos += 2;
        auto rhs = parse_final_term(c);
        if (!rhs) return std::nullopt;
        FinalNode orn;
        orn.kind = FinalNode::Kind::Or;
        orn.kids.push_back(std::move(node));
        orn.kids.push_back(std::move(*rhs));
        node = std::move(orn);
      } else {
        break;
      }
    }
    return node;
  }

  std::optional<FinalNode> parse_final_term(Cursor& c) {
    auto fac = parse_final_factor(c);
    if (!fac) return std::nullopt;
    FinalNode node = std::move(*fac);
    while (true) {
      c.skip_ws();
      if (c.pos + 1 < c.s.size() && c.s[c.pos] == '/' && c.s[c.pos + 1] == '\\') {
        c.pos += 2;
        auto rhs = parse_final_factor(c);
        if (!rhs) return std::nullopt;
        FinalNode andn;
        andn.kind = FinalNode::Kind::And;
        andn.kids.push_back(std::move(node));
        andn.kids.push_back(std::move(*rhs));
        node = std::move(andn);
      } else {
        break;
      }
    }
    return node;
  }

  std::optional<FinalNode> parse_final_factor(Cursor& c) {
    c.skip_ws();
    if (c.eat('~')) {
      auto kid = parse_final_factor(c);
      if (!kid) return std::nullopt;
      FinalNode n;
      n.kind = FinalNode::Kind::Not;
      n.kids.push_back(std::move(*kid));
      return n;
    }
    if (c.eat('(')) {
      auto kid = parse_final_expr(c);
      if (!kid) return std::nullopt;
      if (!expect_char(c, ')')) return std::nullopt;
      return kid;
    }
    FinalNode n;
    n.kind = FinalNode::Kind::Atom;
    auto num = c.number();
    if (num && c.eat(':')) {
      n.atom.is_reg = true;
      n.atom.thread = static_cast<int>(*num);
      auto r = parse_reg(c.ident());
      if (!r) {
        error(c.line, c.col(), "expected register in final atom");
        return std::nullopt;
      }
      n.atom.reg = *r;
    } else if (!num) {
      std::string loc = c.ident();
      if (loc == "true") {
        n.kind = FinalNode::Kind::True;
        return n;
      }
      if (loc.empty()) {
        error(c.line, c.col(), "expected final atom");
        return std::nullopt;
      }
      n.atom.is_reg = false;
      n.atom.loc_name = loc;
      n.atom.loc = intern(loc);
    } else {
      error(c.line, c.col(), "expected ':' after thread id in final atom");
      return std::nullopt;
    }
    if (!expect_char(c, '=')) return std::nullopt;
    auto v = c.number();
    if (v) {
      n.atom.value = *v;
    } else {
      std::string loc = c.ident();
      if (loc.empty()) {
        error(c.line, c.col(), "expected value in final atom");
        return std::nullopt;
      }
      n.atom.value_loc = loc;
      n.atom.value_loc_id = intern(loc);
    }
    return n;
  }

  std::string pending_label_;
  int pending_label_line_ = 0;

  void flush_pending_label(int line) {
    if (!pending_label_.empty()) {
      // A trailing bare label labels an implicit NOP so that injections can
      // point past the last instruction.
      Instruction nop;
      nop.mnem = Mnemonic::Nop;
      nop.label = pending_label_;
      nop.line = line;
      if (section == Section::Thread)
        test.threads[section_thread].code.push_back(nop);
      else if (section == Section::Handler)
        test.handlers[section_thread]->code.push_back(nop);
      pending_label_.clear();
    }
  }

  void parse_line(const std::string& raw, int lineno) {
    std::string line = raw;
    if (auto cut = line.find("//"); cut != std::string::npos) line = line.substr(0, cut);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    Cursor c{line, 0, lineno};
    if (c.at_end()) return;

    // Section headers and directives.
    std::size_t save = c.pos;
    std::string head = c.ident();
    if (head == "name" && c.eat(':')) {
      flush_pending_label(lineno);
      c.skip_ws();
      test.name = line.substr(c.pos);
      section = Section::None;
      return;
    }
    if (head == "init" && c.eat(':')) {
      flush_pending_label(lineno);
      section = Section::Init;
      // Entries may follow on this line.
      while (!c.at_end()) {
        parse_init_entry(c);
        if (!c.eat(';')) break;
      }
      return;
    }
    if (head == "thread" || head == "handler") {
      std::size_t after_head = c.pos;
      auto num = c.number();
      if (num && c.eat(':') && c.at_end()) {
        flush_pending_label(lineno);
        int t = static_cast<int>(*num);
        ensure_thread(t);
        section = head == "thread" ? Section::Thread : Section::Handler;
        section_thread = t;
        if (section == Section::Handler && !test.handlers[t]) test.handlers[t].emplace();
        return;
      }
      c.pos = after_head;
    }
    if (head == "inject") {
      auto num = c.number();
      if (!num) {
        error(lineno, c.col(), "expected thread id after 'inject'");
        return;
      }
      std::string at = c.ident();
      if (at != "at") {
        error(lineno, c.col(), "expected 'at' in inject directive");
        return;
      }
      std::string label = c.ident();
      if (label.empty() || !c.eat(':')) {
        error(lineno, c.col(), "expected 'inject N at LABEL: IRQ'");
        return;
      }
      std::string kind = c.ident();
      if (kind != "IRQ") {
        error(lineno, c.col(), "only IRQ injections are supported");
        return;
      }
      flush_pending_label(lineno);
      int t = static_cast<int>(*num);
      ensure_thread(t);
      test.injections.push_back({t, label, lineno});
      section = Section::None;
      return;
    }
    if (head == "final") {
      flush_pending_label(lineno);
      std::string kind = c.ident();
      if (kind != "exists" && kind != "forbidden") {
        error(lineno, c.col(), "final must be 'exists' or 'forbidden'");
        return;
      }
      test.final_forbidden = kind == "forbidden";
      if (!expect_char(c, ':')) return;
      if (c.at_end()) {
        test.final_cond.kind = FinalNode::Kind::True;
      } else {
        auto node = parse_final_expr(c);
        if (node) test.final_cond = std::move(*node);
      }
      section = Section::None;
      return;
    }
    if (!head.empty() && head[0] == '@') {
      c.pos = save;
      c.eat('@');
      std::string word = c.ident();
      if (word != "expect") {
        error(lineno, c.col(), "unknown directive '@" + word + "'");
        return;
      }
      while (!c.at_end()) {
        std::string variant = c.ident();
        if (variant.empty() || !c.eat('=')) {
          error(lineno, c.col(), "expected VARIANT=allow|forbid|unknown");
          return;
        }
        std::string verdict = c.ident();
        Expectation e;
        if (verdict == "allow")
          e = Expectation::Allow;
        else if (verdict == "forbid")
          e = Expectation::Forbid;
        else if (verdict == "unknown")
          e = Expectation::Unknown;
        else {
          error(lineno, c.col(), "expectation must be allow, forbid or unknown");
          return;
        }
        test.expect.emplace_back(variant, e);
      }
      return;
    }

    // Plain content line of the current section.
    c.pos = 0;
    switch (section) {
      case Section::Init:
        while (!c.at_end()) {
          parse_init_entry(c);
          if (!c.eat(';')) break;
        }
        break;
      case Section::Thread:
        parse_instruction_line(c, test.threads[section_thread]);
        break;
      case Section::Handler:
        parse_instruction_line(c, *test.handlers[section_thread]);
        break;
      case Section::None:
        error(lineno, 1, "content outside any section");
        break;
    }
  }
};

void check_labels(const LitmusTest& t, std::vector<Diagnostic>& diags) {
  auto scan = [&](const ThreadProgram& p, const char* what, int thread) {
    std::map<std::string, int> counts;
    for (const auto& ins : p.code)
      if (!ins.label.empty()) counts[ins.label]++;
    for (const auto& [label, n] : counts)
      if (n > 1)
        diags.push_back({0, 0, std::string("duplicate label '") + label + "' in " + what + " " +
                                   std::to_string(thread)});
    for (const auto& ins : p.code)
      if (!ins.target.empty() && !counts.count(ins.target))
        diags.push_back({ins.line, 0, "branch to unknown label '" + ins.target + "'"});
  };
  for (std::size_t i = 0; i < t.threads.size(); ++i) {
    scan(t.threads[i], "thread", static_cast<int>(i));
    if (t.handlers[i]) scan(*t.handlers[i], "handler", static_cast<int>(i));
  }
}

}  // namespace

ParseResult parse_test(const std::string& text) {
  Parser p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) p.parse_line(line, ++lineno);
  p.flush_pending_label(lineno);

  if (p.test.threads.empty())
    p.error(lineno, 1, "test declares no threads");

  check_labels(p.test, p.diags);

  ParseResult result;
  result.diags = std::move(p.diags);
  if (result.diags.empty()) result.test = std::move(p.test);
  return result;
}

LocationId LitmusTest::location_id(const std::string& n) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i] == n) return static_cast<LocationId>(i);
  return -1;
}

Value LitmusTest::init_value(LocationId id) const {
  if (id < 0 || id >= static_cast<LocationId>(locations.size())) return 0;
  auto it = init_mem.find(locations[id]);
  return it == init_mem.end() ? 0 : it->second;
}

std::optional<Expectation> LitmusTest::expectation(const std::string& variant) const {
  for (const auto& [k, v] : expect)
    if (k == variant) return v;
  return std::nullopt;
}

bool LitmusTest::has_gic_generates() const {
  for (const auto& t : threads)
    for (const auto& i : t.code)
      if (i.mnem == Mnemonic::Msr && i.sysreg == SysReg::Sgi1r) return true;
  for (const auto& h : handlers)
    if (h)
      for (const auto& i : h->code)
        if (i.mnem == Mnemonic::Msr && i.sysreg == SysReg::Sgi1r) return true;
  return false;
}

bool LitmusTest::has_exceptional_content() const {
  if (!injections.empty()) return true;
  auto scan = [](const ThreadProgram& p) {
    for (const auto& i : p.code)
      if (i.mnem == Mnemonic::Svc || i.mnem == Mnemonic::Eret || i.mnem == Mnemonic::Mrs ||
          i.mnem == Mnemonic::Msr || i.fault)
        return true;
    return false;
  };
  for (const auto& t : threads)
    if (scan(t)) return true;
  for (const auto& h : handlers)
    if (h && scan(*h)) return true;
  return false;
}

}  // namespace exmc
