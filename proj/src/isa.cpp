#include "rvobf/isa.hpp"

#include <cstdio>

namespace rvobf {

namespace {

// Base opcodes (bits 6:0) of the supported subset.
constexpr uint32_t kOpLui = 0x37, kOpAuipc = 0x17, kOpJal = 0x6F, kOpJalr = 0x67;
constexpr uint32_t kOpBranch = 0x63, kOpLoad = 0x03, kOpStore = 0x23;
constexpr uint32_t kOpImm = 0x13, kOpReg = 0x33, kOpSystem = 0x73;

uint32_t sext(uint32_t v, int bits) {
  uint32_t m = 1u << (bits - 1);
  return (v ^ m) - m;
}

uint32_t bits(uint32_t w, int hi, int lo) { return (w >> lo) & ((1u << (hi - lo + 1)) - 1); }

bool fits_simm(int32_t v, int nbits) {
  int32_t lim = 1 << (nbits - 1);
  return v >= -lim && v < lim;
}

[[noreturn]] void range_error(const char* what) { throw RangeError(what); }

void check_reg(uint8_t r) {
  if (r > 31) range_error("register index out of range");
}

}  // namespace

UnsupportedInstruction::UnsupportedInstruction(uint32_t w, std::optional<uint32_t> a)
    : std::runtime_error([&] {
        char buf[64];
        if (a)
          std::snprintf(buf, sizeof buf, "unsupported instruction word %08x at %08x", w, *a);
        else
          std::snprintf(buf, sizeof buf, "unsupported instruction word %08x", w);
        return std::string(buf);
      }()),
      word(w),
      addr(a) {}

BranchCond complement(BranchCond c) {
  switch (c) {
    case BranchCond::EQ: return BranchCond::NE;
    case BranchCond::NE: return BranchCond::EQ;
    case BranchCond::LT: return BranchCond::GE;
    case BranchCond::GE: return BranchCond::LT;
    case BranchCond::LTU: return BranchCond::GEU;
    case BranchCond::GEU: return BranchCond::LTU;
  }
  throw NotABranch();
}

bool branch_taken(BranchCond c, uint32_t v1, uint32_t v2) {
  switch (c) {
    case BranchCond::EQ: return v1 == v2;
    case BranchCond::NE: return v1 != v2;
    case BranchCond::LT: return static_cast<int32_t>(v1) < static_cast<int32_t>(v2);
    case BranchCond::GE: return static_cast<int32_t>(v1) >= static_cast<int32_t>(v2);
    case BranchCond::LTU: return v1 < v2;
    case BranchCond::GEU: return v1 >= v2;
  }
  throw NotABranch();
}

const char* cond_name(BranchCond c) {
  static const char* names[] = {"eq", "ne", "lt", "ge", "ltu", "geu"};
  return names[static_cast<int>(c)];
}

const char* opcode_name(Opcode op) {
  static const char* names[] = {
      "lui", "auipc", "jal", "jalr",
      "beq", "bne", "blt", "bge", "bltu", "bgeu",
      "lb", "lh", "lw", "lbu", "lhu",
      "sb", "sh", "sw",
      "addi", "slti", "sltiu", "xori", "ori", "andi", "slli", "srli", "srai",
      "add", "sub", "sll", "slt", "sltu", "xor", "srl", "sra", "or", "and",
      "ecall",
  };
  return names[static_cast<int>(op)];
}

bool is_branch(Opcode op) { return op >= Opcode::Beq && op <= Opcode::Bgeu; }
bool is_load(Opcode op) { return op >= Opcode::Lb && op <= Opcode::Lhu; }
bool is_store(Opcode op) { return op >= Opcode::Sb && op <= Opcode::Sw; }

bool is_branch_word(uint32_t word) {
  if ((word & 0x7F) != kOpBranch) return false;
  uint32_t f3 = bits(word, 14, 12);
  return f3 != 2 && f3 != 3;
}

BranchCond branch_cond(Opcode op) {
  switch (op) {
    case Opcode::Beq: return BranchCond::EQ;
    case Opcode::Bne: return BranchCond::NE;
    case Opcode::Blt: return BranchCond::LT;
    case Opcode::Bge: return BranchCond::GE;
    case Opcode::Bltu: return BranchCond::LTU;
    case Opcode::Bgeu: return BranchCond::GEU;
    default: throw NotABranch();
  }
}

Opcode branch_opcode(BranchCond c) {
  switch (c) {
    case BranchCond::EQ: return Opcode::Beq;
    case BranchCond::NE: return Opcode::Bne;
    case BranchCond::LT: return Opcode::Blt;
    case BranchCond::GE: return Opcode::Bge;
    case BranchCond::LTU: return Opcode::Bltu;
    case BranchCond::GEU: return Opcode::Bgeu;
  }
  throw NotABranch();
}

Instruction decode(uint32_t w) {
  Instruction in;
  uint32_t opc = w & 0x7F;
  uint32_t rd = bits(w, 11, 7), f3 = bits(w, 14, 12);
  uint32_t rs1 = bits(w, 19, 15), rs2 = bits(w, 24, 20), f7 = bits(w, 31, 25);
  in.rd = static_cast<uint8_t>(rd);
  in.rs1 = static_cast<uint8_t>(rs1);
  in.rs2 = static_cast<uint8_t>(rs2);

  auto imm_i = [&] { return static_cast<int32_t>(sext(w >> 20, 12)); };
  auto imm_s = [&] { return static_cast<int32_t>(sext((f7 << 5) | rd, 12)); };
  auto imm_b = [&] {
    uint32_t v = (bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) | (bits(w, 30, 25) << 5) |
                 (bits(w, 11, 8) << 1);
    return static_cast<int32_t>(sext(v, 13));
  };
  auto imm_j = [&] {
    uint32_t v = (bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) | (bits(w, 20, 20) << 11) |
                 (bits(w, 30, 21) << 1);
    return static_cast<int32_t>(sext(v, 21));
  };

  switch (opc) {
    case kOpLui:
      in.op = Opcode::Lui;
      in.rs1 = in.rs2 = 0;
      in.imm = static_cast<int32_t>(w >> 12);
      return in;
    case kOpAuipc:
      in.op = Opcode::Auipc;
      in.rs1 = in.rs2 = 0;
      in.imm = static_cast<int32_t>(w >> 12);
      return in;
    case kOpJal:
      in.op = Opcode::Jal;
      in.rs1 = in.rs2 = 0;
      in.imm = imm_j();
      return in;
    case kOpJalr:
      if (f3 != 0) break;
      in.op = Opcode::Jalr;
      in.rs2 = 0;
      in.imm = imm_i();
      return in;
    case kOpBranch: {
      static constexpr Opcode tbl[8] = {Opcode::Beq,  Opcode::Bne,  Opcode::Ecall, Opcode::Ecall,
                                        Opcode::Blt,  Opcode::Bge,  Opcode::Bltu,  Opcode::Bgeu};
      if (f3 == 2 || f3 == 3) break;
      in.op = tbl[f3];
      in.rd = 0;
      in.imm = imm_b();
      return in;
    }
    case kOpLoad: {
      static constexpr Opcode tbl[8] = {Opcode::Lb,  Opcode::Lh,  Opcode::Lw,  Opcode::Ecall,
                                        Opcode::Lbu, Opcode::Lhu, Opcode::Ecall, Opcode::Ecall};
      if (f3 == 3 || f3 > 5) break;
      in.op = tbl[f3];
      in.rs2 = 0;
      in.imm = imm_i();
      return in;
    }
    case kOpStore: {
      static constexpr Opcode tbl[3] = {Opcode::Sb, Opcode::Sh, Opcode::Sw};
      if (f3 > 2) break;
      in.op = tbl[f3];
      in.rd = 0;
      in.imm = imm_s();
      return in;
    }
    case kOpImm: {
      in.rs2 = 0;
      switch (f3) {
        case 0: in.op = Opcode::Addi; in.imm = imm_i(); return in;
        case 2: in.op = Opcode::Slti; in.imm = imm_i(); return in;
        case 3: in.op = Opcode::Sltiu; in.imm = imm_i(); return in;
        case 4: in.op = Opcode::Xori; in.imm = imm_i(); return in;
        case 6: in.op = Opcode::Ori; in.imm = imm_i(); return in;
        case 7: in.op = Opcode::Andi; in.imm = imm_i(); return in;
        case 1:
          if (f7 != 0) break;
          in.op = Opcode::Slli;
          in.imm = static_cast<int32_t>(rs2);
          return in;
        case 5:
          if (f7 == 0x00) { in.op = Opcode::Srli; in.imm = static_cast<int32_t>(rs2); return in; }
          if (f7 == 0x20) { in.op = Opcode::Srai; in.imm = static_cast<int32_t>(rs2); return in; }
          break;
      }
      break;
    }
    case kOpReg: {
      if (f7 == 0x00) {
        static constexpr Opcode tbl[8] = {Opcode::Add, Opcode::Sll, Opcode::Slt, Opcode::Sltu,
                                          Opcode::Xor, Opcode::Srl, Opcode::Or,  Opcode::And};
        in.op = tbl[f3];
        in.imm = 0;
        return in;
      }
      if (f7 == 0x20 && f3 == 0) { in.op = Opcode::Sub; in.imm = 0; return in; }
      if (f7 == 0x20 && f3 == 5) { in.op = Opcode::Sra; in.imm = 0; return in; }
      break;
    }
    case kOpSystem:
      if (w == 0x00000073) {
        in = Instruction{};
        in.op = Opcode::Ecall;
        return in;
      }
      break;
    default: break;
  }
  throw UnsupportedInstruction(w);
}

uint32_t encode(const Instruction& in) {
  check_reg(in.rd);
  check_reg(in.rs1);
  check_reg(in.rs2);
  uint32_t rd = in.rd, rs1 = in.rs1, rs2 = in.rs2;
  uint32_t imm = static_cast<uint32_t>(in.imm);

  auto enc_u = [&](uint32_t opc) {
    if (in.imm < 0 || in.imm > 0xFFFFF) range_error("U-type immediate out of 20-bit range");
    return (imm << 12) | (rd << 7) | opc;
  };
  auto enc_i = [&](uint32_t opc, uint32_t f3) {
    if (!fits_simm(in.imm, 12)) range_error("I-type immediate out of 12-bit range");
    return ((imm & 0xFFF) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
  };
  auto enc_s = [&](uint32_t f3) {
    if (!fits_simm(in.imm, 12)) range_error("store offset out of 12-bit range");
    return ((imm >> 5 & 0x7F) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) |
           ((imm & 0x1F) << 7) | kOpStore;
  };
  auto enc_b = [&](uint32_t f3) {
    if (!fits_simm(in.imm, 13)) range_error("branch offset out of 13-bit range");
    if (in.imm & 1) range_error("branch offset must be even");
    return ((imm >> 12 & 1) << 31) | ((imm >> 5 & 0x3F) << 25) | (rs2 << 20) | (rs1 << 15) |
           (f3 << 12) | ((imm >> 1 & 0xF) << 8) | ((imm >> 11 & 1) << 7) | kOpBranch;
  };
  auto enc_r = [&](uint32_t f3, uint32_t f7) {
    return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | kOpReg;
  };
  auto enc_sh = [&](uint32_t f3, uint32_t f7) {
    if (in.imm < 0 || in.imm > 31) range_error("shift amount out of range");
    return (f7 << 25) | (imm << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | kOpImm;
  };

  switch (in.op) {
    case Opcode::Lui: return enc_u(kOpLui);
    case Opcode::Auipc: return enc_u(kOpAuipc);
    case Opcode::Jal: {
      if (!fits_simm(in.imm, 21)) range_error("jal offset out of 21-bit range");
      if (in.imm & 1) range_error("jal offset must be even");
      return ((imm >> 20 & 1) << 31) | ((imm >> 1 & 0x3FF) << 21) | ((imm >> 11 & 1) << 20) |
             ((imm >> 12 & 0xFF) << 12) | (rd << 7) | kOpJal;
    }
    case Opcode::Jalr: return enc_i(kOpJalr, 0);
    case Opcode::Beq: return enc_b(0);
    case Opcode::Bne: return enc_b(1);
    case Opcode::Blt: return enc_b(4);
    case Opcode::Bge: return enc_b(5);
    case Opcode::Bltu: return enc_b(6);
    case Opcode::Bgeu: return enc_b(7);
    case Opcode::Lb: return enc_i(kOpLoad, 0);
    case Opcode::Lh: return enc_i(kOpLoad, 1);
    case Opcode::Lw: return enc_i(kOpLoad, 2);
    case Opcode::Lbu: return enc_i(kOpLoad, 4);
    case Opcode::Lhu: return enc_i(kOpLoad, 5);
    case Opcode::Sb: return enc_s(0);
    case Opcode::Sh: return enc_s(1);
    case Opcode::Sw: return enc_s(2);
    case Opcode::Addi: return enc_i(kOpImm, 0);
    case Opcode::Slti: return enc_i(kOpImm, 2);
    case Opcode::Sltiu: return enc_i(kOpImm, 3);
    case Opcode::Xori: return enc_i(kOpImm, 4);
    case Opcode::Ori: return enc_i(kOpImm, 6);
    case Opcode::Andi: return enc_i(kOpImm, 7);
    case Opcode::Slli: return enc_sh(1, 0x00);
    case Opcode::Srli: return enc_sh(5, 0x00);
    case Opcode::Srai: return enc_sh(5, 0x20);
    case Opcode::Add: return enc_r(0, 0x00);
    case Opcode::Sub: return enc_r(0, 0x20);
    case Opcode::Sll: return enc_r(1, 0x00);
    case Opcode::Slt: return enc_r(2, 0x00);
    case Opcode::Sltu: return enc_r(3, 0x00);
    case Opcode::Xor: return enc_r(4, 0x00);
    case Opcode::Srl: return enc_r(5, 0x00);
    case Opcode::Sra: return enc_r(5, 0x20);
    case Opcode::Or: return enc_r(6, 0x00);
    case Opcode::And: return enc_r(7, 0x00);
    case Opcode::Ecall: return 0x00000073;
  }
  range_error("unencodable instruction");
}

Instruction complement_branch(const Instruction& in) {
  if (!is_branch(in.op)) throw NotABranch();
  Instruction out = in;
  out.op = branch_opcode(complement(branch_cond(in.op)));
  return out;
}

namespace {
const char* kAbiNames[32] = {
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0",
    "a1",   "a2", "a3", "a4", "a5", "a6", "a7", "s2", "s3", "s4", "s5",
    "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
}

std::optional<uint8_t> parse_register(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'X')) {
    bool numeric = true;
    for (size_t i = 1; i < name.size(); ++i) numeric = numeric && name[i] >= '0' && name[i] <= '9';
    if (numeric && name.size() <= 3) {
      int v = std::stoi(name.substr(1));
      if (v >= 0 && v <= 31) return static_cast<uint8_t>(v);
    }
  }
  if (name == "fp") return 8;
  for (int i = 0; i < 32; ++i)
    if (name == kAbiNames[i]) return static_cast<uint8_t>(i);
  return std::nullopt;
}

const char* abi_register_name(uint8_t index) { return kAbiNames[index & 31]; }

std::string format_instruction(const Instruction& in) {
  char buf[64];
  const char* n = opcode_name(in.op);
  switch (in.op) {
    case Opcode::Lui:
    case Opcode::Auipc:
      std::snprintf(buf, sizeof buf, "%s x%d, 0x%x", n, in.rd, in.imm);
      break;
    case Opcode::Jal:
      std::snprintf(buf, sizeof buf, "%s x%d, %d", n, in.rd, in.imm);
      break;
    case Opcode::Jalr:
      std::snprintf(buf, sizeof buf, "%s x%d, %d(x%d)", n, in.rd, in.imm, in.rs1);
      break;
    case Opcode::Beq: case Opcode::Bne: case Opcode::Blt:
    case Opcode::Bge: case Opcode::Bltu: case Opcode::Bgeu:
      std::snprintf(buf, sizeof buf, "%s x%d, x%d, %d", n, in.rs1, in.rs2, in.imm);
      break;
    case Opcode::Lb: case Opcode::Lh: case Opcode::Lw: case Opcode::Lbu: case Opcode::Lhu:
      std::snprintf(buf, sizeof buf, "%s x%d, %d(x%d)", n, in.rd, in.imm, in.rs1);
      break;
    case Opcode::Sb: case Opcode::Sh: case Opcode::Sw:
      std::snprintf(buf, sizeof buf, "%s x%d, %d(x%d)", n, in.rs2, in.imm, in.rs1);
      break;
    case Opcode::Slli: case Opcode::Srli: case Opcode::Srai:
    case Opcode::Addi: case Opcode::Slti: case Opcode::Sltiu:
    case Opcode::Xori: case Opcode::Ori: case Opcode::Andi:
      std::snprintf(buf, sizeof buf, "%s x%d, x%d, %d", n, in.rd, in.rs1, in.imm);
      break;
    case Opcode::Ecall:
      std::snprintf(buf, sizeof buf, "%s", n);
      break;
    default:
      std::snprintf(buf, sizeof buf, "%s x%d, x%d, x%d", n, in.rd, in.rs1, in.rs2);
      break;
  }
  return buf;
}

void validate_image(const ProgramImage& img) {
  if (img.base_addr & 3u) throw std::invalid_argument("image base address not 4-aligned");
  if (img.entry & 3u) throw std::invalid_argument("image entry not 4-aligned");
  if (!img.code.empty() && !img.contains_code_addr(img.entry))
    throw std::invalid_argument("image entry outside code segment");
  if (img.code.empty()) throw std::invalid_argument("image has no code");
  uint64_t code_lo = img.base_addr, code_hi = img.base_addr + 4ull * img.code.size();
  uint64_t data_lo = img.data_base, data_hi = img.data_base + img.data.size();
  if (!img.data.empty() && code_lo < data_hi && data_lo < code_hi)
    throw std::invalid_argument("code and data segments overlap");
}

}  // namespace rvobf
