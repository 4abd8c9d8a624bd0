// Deterministic 7-stage in-order RV32I pipeline model with four
// microarchitecture variants and exact cycle accounting.
//
// Stages: IF1 IF2 ID EX MA1 MA2 WB.
//
// Timing rules (all variants):
//   - static predict-not-taken; control transfers resolve at the end of EX;
//     a taken effective outcome (and every jal/jalr) flushes IF1/IF2/ID,
//     a 3-cycle penalty.
//   - full ALU forwarding: an ALU result produced in EX at cycle c is usable
//     by an EX consumer at c+1. Load results are available after MA2: a
//     consumer 1 instruction behind a load stalls 2 cycles, 2 behind stalls
//     1 cycle (the consumer waits in ID).
//   - the keyed hash starts the cycle a conditional branch enters ID and
//     finishes L cycles later; under StalledHash (and CachedHash misses) the
//     branch occupies EX until then, stalling ID and earlier. With no other
//     stalls the extra cost is exactly L-1 cycles per branch.
//   - CachedHash probes the hash cache in the same ID-entry cycle; a hit
//     forwards the bit in time for EX (zero stall); a miss behaves like
//     StalledHash and fills the line when the branch executes. Squashed
//     branches neither fill the cache nor count as hits/misses.
//   - MaskBased reads the reversal bit with the instruction; timing is
//     identical to Baseline.
//
// Functional rule: at execute, a conditional branch's effective outcome is
// static_taken XOR d, where d = 0 (Baseline), hash_bit(key, branch pc)
// (StalledHash/CachedHash), or the mask bit at the branch's word (MaskBased).
//
// ECALL convention: a7=93 halts with exit code a0; a7=64 appends the low
// byte of a0 to the output stream; other a7 values are no-ops.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvobf/isa.hpp"
#include "rvobf/obfuscate.hpp"
#include "rvobf/prf.hpp"

namespace rvobf {

struct MissingKey : std::runtime_error {
  MissingKey() : std::runtime_error("this architecture requires a program key") {}
};
struct MissingMask : std::runtime_error {
  MissingMask() : std::runtime_error("mask-based architecture requires a mask stream") {}
};

enum class ArchKind { Baseline, StalledHash, MaskBased, CachedHash };

const char* arch_name(ArchKind k);
std::optional<ArchKind> parse_arch(const std::string& name);

struct MicroArchConfig {
  ArchKind kind = ArchKind::Baseline;
  HashSpec hash;                   // StalledHash/CachedHash
  unsigned cache_lines = 256;      // CachedHash; power of two
  std::optional<ProgramKey> key;   // required by StalledHash/CachedHash
  std::optional<MaskStream> mask;  // required by MaskBased
};

// Direct-mapped hash-bit cache, one branch per line.
// index(addr) = (addr >> 2) mod lines; tag(addr) = addr >> (2 + log2(lines)).
class HashCache {
 public:
  explicit HashCache(unsigned lines);
  struct ProbeResult {
    bool hit = false;
    uint8_t bit = 0;
  };
  ProbeResult probe(uint32_t addr) const;           // read-only
  void fill(uint32_t addr, uint8_t bit);            // evicts any occupant
  unsigned lines() const { return static_cast<unsigned>(lines_.size()); }

 private:
  struct Line {
    bool valid = false;
    uint32_t tag = 0;
    uint8_t bit = 0;
  };
  std::vector<Line> lines_;
  unsigned index_bits_;
};

struct CycleStats {
  uint64_t cycles = 0;
  uint64_t retired = 0;
  uint64_t branch_count = 0;       // retired conditional branches
  uint64_t taken_flushes = 0;      // redirects: taken branches + jal/jalr
  uint64_t hash_stall_cycles = 0;  // EX cycles held awaiting the hash unit
  uint64_t load_use_stalls = 0;    // ID cycles held on operand readiness
  uint64_t cache_hits = 0;         // CachedHash only
  uint64_t cache_misses = 0;
};

struct MachineState {
  uint32_t pc = 0;  // next pc to execute
  std::array<uint32_t, 32> regs{};
  uint32_t data_base = 0;
  std::vector<uint8_t> data;
  bool halted = false;
  uint32_t exit_code = 0;
  std::vector<uint8_t> output;
};

struct TraceEntry {
  uint64_t cycle = 0;  // retire cycle
  uint32_t pc = 0;
  uint32_t word = 0;
  uint8_t is_branch = 0;
  uint8_t taken = 0;  // effective outcome (after XOR correction)
  uint8_t dbit = 0;
};

enum class RunStatus { Ok, CycleLimitExceeded, MemFault, UnsupportedInstruction };

struct RunLimits {
  uint64_t max_cycles = 50'000'000;
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  uint32_t fault_addr = 0;  // MemFault/UnsupportedInstruction
  MachineState state;
  CycleStats stats;
  std::vector<TraceEntry> trace;
};

enum class Stage { IF1 = 0, IF2, ID, EX, MA1, MA2, WB };

// Cycle-stepped pipeline; exposed so tests can check per-stage scheduling.
class Pipeline {
 public:
  Pipeline(const ProgramImage& img, const MicroArchConfig& cfg, RunLimits limits = {});

  // Simulates one cycle; returns false once the run has finished.
  bool step_cycle();
  bool done() const { return done_; }
  uint64_t cycle() const { return cycle_; }
  std::optional<uint32_t> stage_pc(Stage s) const;

  RunStatus status() const { return status_; }
  uint32_t fault_addr() const { return fault_addr_; }
  const CycleStats& stats() const { return stats_; }
  const MachineState& state() const { return ms_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  RunResult result() const;

 private:
  struct Slot {
    bool valid = false;
    uint32_t pc = 0;
    uint32_t word = 0;
    int32_t index = -1;  // code word index; -1 = off-image fetch
    uint64_t id_entry = 0;
    uint64_t ex_entry = 0;
    uint64_t hash_ready = 0;  // EX may not complete before this cycle (branches)
    uint8_t dbit = 0;
    bool probe_hit = false;
    bool needs_fill = false;
    bool effective_taken = false;
    bool halts = false;
  };

  void fetch_into_if1();
  void enter_id(Slot& s);
  bool operands_ready(const Slot& s) const;
  void advance();
  void execute_ex(Slot& s);
  void retire(const Slot& s);
  void fail(RunStatus st, uint32_t addr);

  std::optional<uint32_t> read_mem(uint32_t addr, unsigned n) const;
  bool write_mem(uint32_t addr, unsigned n, uint32_t value);

  const ProgramImage img_;
  MicroArchConfig cfg_;
  RunLimits lim_;
  std::vector<std::optional<Instruction>> decoded_;  // per code word

  std::array<Slot, 7> st_{};
  uint64_t cycle_ = 0;
  uint32_t fetch_pc_ = 0;
  bool fetch_enabled_ = true;
  bool ex_completed_ = true;
  bool redirect_ = false;
  uint32_t redirect_target_ = 0;
  bool halt_squash_ = false;
  bool done_ = false;
  RunStatus status_ = RunStatus::Ok;
  uint32_t fault_addr_ = 0;
  std::array<uint64_t, 32> reg_ready_{};  // earliest EX cycle a consumer may read

  MachineState ms_;
  CycleStats stats_;
  std::vector<TraceEntry> trace_;
  HashCache cache_;
};

// Runs to completion (ECALL exit, fault, or cycle limit).
RunResult run(const ProgramImage& img, const MicroArchConfig& cfg, RunLimits limits = {});

// key=value block of the stats; cache counters included for CachedHash.
std::string stats_to_text(const CycleStats& s, ArchKind kind);

// --trace format: one line per retired instruction,
// "cycle pc word" plus " B taken|not-taken d=<bit>" for branches.
std::string trace_to_text(const std::vector<TraceEntry>& trace);

}  // namespace rvobf
