// RV32I subset data model: decoded instructions, bit-exact encode/decode,
// and the branch-condition complement map used by the obfuscator.
//
// Supported subset: LUI, AUIPC, JAL, JALR, the six conditional branches,
// LB/LBU/LH/LHU/LW, SB/SH/SW, all OP-IMM and OP ALU instructions, ECALL.
// No FENCE, CSR, or M/A/F extensions.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvobf {

// ---------------------------------------------------------------------------
// Errors

struct UnsupportedInstruction : std::runtime_error {
  uint32_t word;
  std::optional<uint32_t> addr;
  explicit UnsupportedInstruction(uint32_t w, std::optional<uint32_t> a = std::nullopt);
};

struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotABranch : std::logic_error {
  NotABranch() : std::logic_error("instruction is not a conditional branch") {}
};

// ---------------------------------------------------------------------------
// Branch conditions

enum class BranchCond : uint8_t { EQ, NE, LT, GE, LTU, GEU };

// Complement pairs: EQ<->NE, LT<->GE, LTU<->GEU. Involution by construction.
BranchCond complement(BranchCond c);

// Static taken bit of a condition over two register values.
bool branch_taken(BranchCond c, uint32_t v1, uint32_t v2);

const char* cond_name(BranchCond c);

// ---------------------------------------------------------------------------
// Instructions

enum class Opcode : uint8_t {
  Lui, Auipc, Jal, Jalr,
  Beq, Bne, Blt, Bge, Bltu, Bgeu,
  Lb, Lh, Lw, Lbu, Lhu,
  Sb, Sh, Sw,
  Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
  Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
  Ecall,
};

const char* opcode_name(Opcode op);

// One decoded instruction. Field use depends on the opcode class:
//   U-type (Lui/Auipc):      rd, imm = raw 20-bit field value (0..0xFFFFF)
//   J-type (Jal):            rd, imm = signed byte offset (even)
//   I-type (Jalr/loads/imm): rd, rs1, imm = signed 12-bit
//   B-type (branches):       rs1, rs2, imm = signed byte offset (even)
//   S-type (stores):         rs1 = base, rs2 = data, imm = signed 12-bit
//   R-type (ALU reg-reg):    rd, rs1, rs2
//   Ecall:                   no fields
struct Instruction {
  Opcode op = Opcode::Ecall;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0;
  bool operator==(const Instruction&) const = default;
};

bool is_branch(Opcode op);
bool is_load(Opcode op);
bool is_store(Opcode op);
bool is_branch_word(uint32_t word);  // cheap predicate, no full decode

// Condition carried by a branch opcode; throws NotABranch otherwise.
BranchCond branch_cond(Opcode op);
Opcode branch_opcode(BranchCond c);

// Decodes a 32-bit little-endian instruction word. Rejects anything outside
// the supported subset (including non-canonical encodings that would break
// the encode/decode round-trip) with UnsupportedInstruction.
Instruction decode(uint32_t word);

// Bit-exact RV32I encoding; decode(encode(i)) == i. Throws RangeError when a
// field is out of range (e.g. branch offset beyond +-4 KiB or odd).
uint32_t encode(const Instruction& instr);

// Returns the branch with the complemented condition code and identical
// operands/offset, so taken(result) == !taken(input) for all register values.
// Throws NotABranch for non-branch input.
Instruction complement_branch(const Instruction& instr);

// Register number from an ABI name ("a0", "s11", "zero", ...) or "x0".."x31".
std::optional<uint8_t> parse_register(const std::string& name);
const char* abi_register_name(uint8_t index);

// Human-readable one-line disassembly (numeric offsets, x-register names).
std::string format_instruction(const Instruction& instr);

// ---------------------------------------------------------------------------
// Program images

// Laid-out instruction words at fixed addresses plus one data segment.
// addr_of(i) = base_addr + 4*i; obfuscation never changes the layout.
struct ProgramImage {
  uint32_t base_addr = 0;
  std::vector<uint32_t> code;
  uint32_t data_base = 0;
  std::vector<uint8_t> data;
  uint32_t entry = 0;

  uint32_t addr_of(size_t i) const { return base_addr + static_cast<uint32_t>(4 * i); }
  uint32_t code_end() const { return base_addr + static_cast<uint32_t>(4 * code.size()); }
  bool contains_code_addr(uint32_t addr) const {
    return addr >= base_addr && addr < code_end() && (addr & 3u) == 0;
  }
  std::optional<uint32_t> word_at(uint32_t addr) const {
    if (!contains_code_addr(addr)) return std::nullopt;
    return code[(addr - base_addr) / 4];
  }
  bool operator==(const ProgramImage&) const = default;
};

// Checks base/entry alignment, entry inside code, code/data non-overlap.
// Throws std::invalid_argument on violation.
void validate_image(const ProgramImage& img);

}  // namespace rvobf
