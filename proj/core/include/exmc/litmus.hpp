#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exmc/event.hpp"

namespace exmc {

enum class Mnemonic {
  Mov, Add, And, Eor, Cmp,
  B, Bcond, Cbz, Cbnz,
  Ldr, Str, Ldar, Stlr, Ldxr, Stxr,
  Dmb, Dsb, Isb,
  Svc, Eret, Nop,
  Mrs, Msr,
};

enum class CondCode { Eq, Ne };

struct Instruction {
  std::string label;  // empty when the line carries no label
  Mnemonic mnem{};
  int rd = -1;
  int rn = -1;
  int rm = -1;                // index register of [Xn, Xm], or second source
  bool has_imm = false;
  Value imm = 0;
  int imm_shift = 0;          // MOV Xd, #imm, LSL #n
  std::string target;         // branch target label
  CondCode cond = CondCode::Eq;
  FenceKind fence = FenceKind::DmbSy;
  SysReg sysreg = SysReg::Esr;
  bool fault = false;         // !fault suffix on the memory operand
  int line = 0;

  bool operator==(const Instruction&) const = default;
};

struct ThreadProgram {
  std::vector<Instruction> code;
  bool operator==(const ThreadProgram&) const = default;
};

struct Injection {
  ThreadId thread = -1;
  std::string label;
  int line = 0;
  bool operator==(const Injection&) const = default;
};

struct FinalAtom {
  bool is_reg = false;
  ThreadId thread = -1;
  int reg = -1;
  std::string loc_name;       // memory atom
  LocationId loc = -1;
  Value value = 0;
  std::string value_loc;      // set when the value is a location name
  LocationId value_loc_id = -1;
  bool operator==(const FinalAtom&) const = default;
};

struct FinalNode {
  enum class Kind { True, Atom, Not, And, Or };
  Kind kind = Kind::True;
  FinalAtom atom;
  std::vector<FinalNode> kids;
  bool operator==(const FinalNode&) const = default;
};

enum class Expectation { Allow, Forbid, Unknown };

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

/// Per-thread configuration carried by the init section.
struct ThreadInit {
  std::map<int, Value> regs;              // plain numeric values
  std::map<int, std::string> reg_locs;    // registers holding a location address
  int pstate_el = 0;                      // housed, induces no ordering
  std::optional<int> eoimode;
  bool operator==(const ThreadInit&) const = default;
};

struct LitmusTest {
  std::string name;
  std::vector<std::string> locations;       // intern table; LocationId = index
  std::map<std::string, Value> init_mem;    // defaults to 0
  std::vector<ThreadProgram> threads;
  std::vector<std::optional<ThreadProgram>> handlers;
  std::vector<ThreadInit> thread_init;
  std::vector<Injection> injections;
  bool final_forbidden = false;             // the figure annotation on the final state
  FinalNode final_cond;
  std::vector<std::pair<std::string, Expectation>> expect;  // variant -> verdict

  LocationId location_id(const std::string& name) const;
  Value location_addr(LocationId id) const { return 0x1000 + 0x10 * static_cast<Value>(id); }
  Value init_value(LocationId id) const;
  std::optional<Expectation> expectation(const std::string& variant) const;

  bool has_gic_generates() const;
  bool has_exceptional_content() const;

  bool operator==(const LitmusTest&) const = default;
};

struct ParseResult {
  std::optional<LitmusTest> test;
  std::vector<Diagnostic> diags;
  bool ok() const { return test.has_value() && diags.empty(); }
};

ParseResult parse_test(const std::string& text);
std::string pretty_print(const LitmusTest& test);
std::vector<Diagnostic> validate_test(const LitmusTest& test);

const char* mnemonic_name(Mnemonic m);
std::string format_final(const FinalNode& n);

}  // namespace exmc
