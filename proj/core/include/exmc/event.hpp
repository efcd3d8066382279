#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace exmc {

using Value = std::uint64_t;
using EventId = int;
using ThreadId = int;
using LocationId = int;

constexpr int kRegBank = 31;        // X0..X30
constexpr unsigned kSpuriousIntid = 1023;

enum class FenceKind { DmbLd, DmbSt, DmbSy, DsbLd, DsbSt, DsbSy, Isb };

inline bool is_dsb(FenceKind k) {
  return k == FenceKind::DsbLd || k == FenceKind::DsbSt || k == FenceKind::DsbSy;
}

enum class ExcCause { Svc, PageFault, Irq };

enum class SysReg { Esr, Elr, Vbar, Tpidr, Sgi1r, Iar, Eoir, Dir, DaifSet, DaifClr };

const char* sysreg_name(SysReg r);

enum class EventType {
  Read,
  Write,
  Fence,
  TakeException,   // cause Irq doubles as the TakeInterrupt marker
  Eret,
  Msr,
  Mrs,
  GenerateInterrupt,
  Acknowledge,
  DropPriority,
  Deactivate,
};

/// One architectural effect. (thread, fdx, seq) totally orders a thread's
/// events; GIC effects sit iio-after their inducing register access and do
/// not take part in program order.
struct Event {
  EventId id = -1;
  ThreadId thread = -1;
  int fdx = 0;
  int seq = 0;
  EventType type{};

  // Memory accesses.
  LocationId loc = -1;
  Value value = 0;
  bool acquire = false;     // A
  bool acquire_pc = false;  // Q
  bool release = false;     // L
  bool exclusive = false;   // X

  FenceKind fence = FenceKind::DmbSy;
  ExcCause cause = ExcCause::Svc;
  SysReg reg = SysReg::Esr;

  // GIC payload.
  unsigned intid = 0;
  std::uint32_t target_mask = 0;   // bit t set: thread t targeted
  EventId induced_by = -1;         // register access this GIC effect hangs off

  bool is_memory_read() const { return type == EventType::Read; }
  bool is_memory_write() const { return type == EventType::Write; }
  bool is_memory_access() const { return is_memory_read() || is_memory_write(); }
  bool is_gic_effect() const {
    return type == EventType::GenerateInterrupt || type == EventType::Acknowledge ||
           type == EventType::DropPriority || type == EventType::Deactivate;
  }
  bool is_take_interrupt() const {
    return type == EventType::TakeException && cause == ExcCause::Irq;
  }
  /// GIC effects are kept out of program order.
  bool in_po() const { return !is_gic_effect(); }
};

std::string event_brief(const Event& e, const std::vector<std::string>& loc_names);

/// Local dependency edge between events of one thread (indices into the
/// thread's event list).
using LocalEdge = std::pair<int, int>;

/// Per-thread elaboration result: the event sequence in (fdx, seq) order plus
/// intra-thread relations over local indices.
struct ThreadEventGraph {
  ThreadId thread = -1;
  std::vector<Event> events;
  std::vector<LocalEdge> addr;
  std::vector<LocalEdge> data;
  std::vector<LocalEdge> ctrl;
  std::vector<LocalEdge> rmw;
  std::vector<LocalEdge> iio;
  std::array<Value, kRegBank> final_regs{};
  bool cu_flagged = false;  // constrained-unpredictable GIC usage seen
};

}  // namespace exmc
