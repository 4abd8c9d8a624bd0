#include "rvobf/assembler.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace rvobf {

namespace {

constexpr uint32_t kDefaultCodeBase = 0x00001000;
constexpr uint32_t kDefaultDataBase = 0x00010000;

[[noreturn]] void parse_error(int line, const std::string& msg) {
  throw AsmError(AsmError::Kind::Parse, line, msg);
}

[[noreturn]] void range_err(int line, const std::string& msg) {
  throw AsmError(AsmError::Kind::Range, line, msg);
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

// Splits on whitespace, commas and parens; parens are kept as tokens so
// memory operands OFF(rs) tokenize as OFF ( rs ).
std::vector<std::string> tokenize(const std::string& s, int line_no) {
  std::vector<std::string> toks;
  std::string cur;
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_str) {
      cur += c;
      if (c == '"') {
        in_str = false;
        toks.push_back(cur);
        cur.clear();
      } else if (c == '\\' && i + 1 < s.size()) {
        cur += s[++i];
      }
      continue;
    }
    if (c == '"') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      cur = "\"";
      in_str = true;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
    } else if (c == '(' || c == ')') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      toks.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  if (in_str) parse_error(line_no, "unterminated string literal");
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

std::optional<int64_t> parse_int(const std::string& t) {
  if (t.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (t[0] == '-' || t[0] == '+') { neg = t[0] == '-'; i = 1; }
  if (i >= t.size()) return std::nullopt;
  int base = 10;
  if (t.size() - i > 2 && t[i] == '0' && (t[i + 1] == 'x' || t[i + 1] == 'X')) {
    base = 16;
    i += 2;
  }
  int64_t v = 0;
  for (; i < t.size(); ++i) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t[i])));
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else return std::nullopt;
    v = v * base + d;
    if (v > 0x1'0000'0000LL) return std::nullopt;  // clamp: nothing needs more than 32 bits
  }
  return neg ? -v : v;
}

bool valid_label_name(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '$')
      return false;
  return !parse_int(t).has_value();
}

enum class Section { Code, Data };

// One parsed statement. Code statements carry pre-expanded concrete
// instructions with symbolic operands still unresolved.
struct Operand {
  enum class Kind { Reg, Imm, Sym } kind = Kind::Imm;
  uint8_t reg = 0;
  int64_t imm = 0;
  std::string sym;
};

struct Stmt {
  int line = 0;
  std::string mnemonic;
  std::vector<Operand> ops;
  uint32_t addr = 0;
  int words = 1;   // code size after pseudo expansion
};

struct DataChunk {
  int line = 0;
  std::vector<uint8_t> bytes;  // fully resolved in pass 1 (.word/.byte/.ascii take literals)
  uint32_t addr = 0;
};

struct Assembler {
  std::map<std::string, uint32_t> symbols;
  std::vector<Stmt> stmts;
  std::vector<DataChunk> data_chunks;
  uint32_t code_base = kDefaultCodeBase;
  uint32_t data_base = kDefaultDataBase;
  bool code_base_set = false, data_base_set = false;
  uint32_t code_size_words = 0;
  uint32_t data_size = 0;
  std::string entry_label;
  int entry_line = 0;

  void define_label(const std::string& name, Section sec, int line) {
    if (!valid_label_name(name)) parse_error(line, "invalid label name '" + name + "'");
    uint32_t addr = sec == Section::Code ? code_base + 4 * code_size_words
                                         : data_base + data_size;
    auto [it, inserted] = symbols.emplace(name, addr);
    if (!inserted)
      throw AsmError(AsmError::Kind::DuplicateLabel, line, "duplicate label '" + name + "'");
  }

  Operand parse_operand(const std::string& tok, int line) {
    Operand op;
    if (auto r = parse_register(tok)) {
      op.kind = Operand::Kind::Reg;
      op.reg = *r;
      return op;
    }
    if (auto v = parse_int(tok)) {
      op.kind = Operand::Kind::Imm;
      op.imm = *v;
      return op;
    }
    if (valid_label_name(tok)) {
      op.kind = Operand::Kind::Sym;
      op.sym = tok;
      return op;
    }
    parse_error(line, "cannot parse operand '" + tok + "'");
  }

  // Parses operand tokens; memory form OFF ( reg ) folds into two operands
  // imm, reg. Returns the operand list.
  std::vector<Operand> parse_operands(const std::vector<std::string>& toks, size_t from, int line) {
    std::vector<Operand> ops;
    for (size_t i = from; i < toks.size(); ++i) {
      if (toks[i] == "(") {
        if (i + 2 >= toks.size() || toks[i + 2] != ")")
          parse_error(line, "malformed memory operand");
        ops.push_back(parse_operand(toks[i + 1], line));
        i += 2;
      } else {
        ops.push_back(parse_operand(toks[i], line));
      }
    }
    return ops;
  }

  static int li_words(int64_t v) { return v >= -2048 && v <= 2047 ? 1 : 2; }

  void add_stmt(const std::string& mnemonic, std::vector<Operand> ops, int line) {
    Stmt s;
    s.line = line;
    s.mnemonic = mnemonic;
    s.ops = std::move(ops);
    s.addr = code_base + 4 * code_size_words;
    s.words = 1;
    if (mnemonic == "li") {
      if (s.ops.size() != 2) parse_error(line, "li needs rd, value");
      // label value unknown in pass 1: always use the 2-word form
      s.words = s.ops[1].kind == Operand::Kind::Sym ? 2 : li_words(s.ops[1].imm);
    } else if (mnemonic == "call") {
      s.words = 2;
    }
    code_size_words += static_cast<uint32_t>(s.words);
    stmts.push_back(std::move(s));
  }

  void add_data(std::vector<uint8_t> bytes, int line) {
    DataChunk c;
    c.line = line;
    c.addr = data_base + data_size;
    data_size += static_cast<uint32_t>(bytes.size());
    c.bytes = std::move(bytes);
    data_chunks.push_back(std::move(c));
  }

  void pass1(const std::string& source) {
    Section sec = Section::Code;
    std::istringstream in(source);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      auto toks = tokenize(strip_comment(raw), line_no);
      size_t idx = 0;
      // leading label definitions
      while (idx < toks.size() && toks[idx].size() > 1 && toks[idx].back() == ':') {
        define_label(toks[idx].substr(0, toks[idx].size() - 1), sec, line_no);
        ++idx;
      }
      if (idx >= toks.size()) continue;
      const std::string& head = toks[idx];

      if (head == ".org") {
        if (idx + 2 != toks.size()) parse_error(line_no, ".org needs one address");
        auto v = parse_int(toks[idx + 1]);
        if (!v || *v < 0 || *v > 0xFFFFFFFFLL) parse_error(line_no, "bad .org address");
        if (sec == Section::Code) {
          if (code_size_words > 0) parse_error(line_no, ".org after code content");
          if ((*v & 3) != 0) parse_error(line_no, ".org address not 4-aligned");
          code_base = static_cast<uint32_t>(*v);
          code_base_set = true;
        } else {
          if (data_size > 0) parse_error(line_no, ".org after data content");
          data_base = static_cast<uint32_t>(*v);
          data_base_set = true;
        }
        continue;
      }
      if (head == ".entry") {
        if (idx + 2 != toks.size()) parse_error(line_no, ".entry needs one label");
        entry_label = toks[idx + 1];
        entry_line = line_no;
        continue;
      }
      if (head == ".data") {
        sec = Section::Data;
        continue;
      }
      if (head == ".word" || head == ".byte") {
        if (sec != Section::Data) parse_error(line_no, head + " outside .data section");
        std::vector<uint8_t> bytes;
        if (idx + 1 >= toks.size()) parse_error(line_no, head + " needs values");
        for (size_t i = idx + 1; i < toks.size(); ++i) {
          auto v = parse_int(toks[i]);
          if (!v) parse_error(line_no, "bad value '" + toks[i] + "'");
          if (head == ".word") {
            if (*v < -0x80000000LL || *v > 0xFFFFFFFFLL) range_err(line_no, ".word out of range");
            uint32_t u = static_cast<uint32_t>(*v);
            bytes.push_back(u & 0xFF);
            bytes.push_back(u >> 8 & 0xFF);
            bytes.push_back(u >> 16 & 0xFF);
            bytes.push_back(u >> 24 & 0xFF);
          } else {
            if (*v < -128 || *v > 255) range_err(line_no, ".byte out of range");
            bytes.push_back(static_cast<uint8_t>(*v));
          }
        }
        add_data(std::move(bytes), line_no);
        continue;
      }
      if (head == ".ascii") {
        if (sec != Section::Data) parse_error(line_no, ".ascii outside .data section");
        if (idx + 2 != toks.size() || toks[idx + 1].size() < 2 || toks[idx + 1].front() != '"' ||
            toks[idx + 1].back() != '"')
          parse_error(line_no, ".ascii needs one quoted string");
        const std::string& lit = toks[idx + 1];
        std::vector<uint8_t> bytes;
        for (size_t i = 1; i + 1 < lit.size(); ++i) {
          char c = lit[i];
          if (c == '\\' && i + 2 < lit.size()) {
            char e = lit[++i];
            switch (e) {
              case 'n': c = '\n'; break;
              case 't': c = '\t'; break;
              case '0': c = '\0'; break;
              case '\\': c = '\\'; break;
              case '"': c = '"'; break;
              default: parse_error(line_no, "unknown escape in .ascii");
            }
          }
          bytes.push_back(static_cast<uint8_t>(c));
        }
        add_data(std::move(bytes), line_no);
        continue;
      }
      if (head[0] == '.') parse_error(line_no, "unknown directive '" + head + "'");
      if (sec != Section::Code) parse_error(line_no, "instruction in .data section");
      add_stmt(head, parse_operands(toks, idx + 1, line_no), line_no);
    }
  }

  uint32_t resolve(const Operand& op, int line) {
    if (op.kind == Operand::Kind::Imm) return static_cast<uint32_t>(op.imm);
    if (op.kind == Operand::Kind::Sym) {
      auto it = symbols.find(op.sym);
      if (it == symbols.end())
        throw AsmError(AsmError::Kind::UndefinedLabel, line, "undefined label '" + op.sym + "'");
      return it->second;
    }
    parse_error(line, "expected immediate or label, got register");
  }

  uint8_t want_reg(const Stmt& s, size_t i) {
    if (i >= s.ops.size() || s.ops[i].kind != Operand::Kind::Reg)
      parse_error(s.line, s.mnemonic + ": expected register operand");
    return s.ops[i].reg;
  }

  int32_t want_imm(const Stmt& s, size_t i) {
    if (i >= s.ops.size() || s.ops[i].kind == Operand::Kind::Reg)
      parse_error(s.line, s.mnemonic + ": expected immediate operand");
    return static_cast<int32_t>(resolve(s.ops[i], s.line));
  }

  void want_arity(const Stmt& s, size_t n) {
    if (s.ops.size() != n) parse_error(s.line, s.mnemonic + ": wrong operand count");
  }

  uint32_t enc(const Instruction& in, int line) {
    try {
      return encode(in);
    } catch (const RangeError& e) {
      range_err(line, e.what());
    }
  }

  // Branch/jump target: label or absolute address; returns pc-relative offset.
  int32_t target_offset(const Stmt& s, size_t i, uint32_t pc) {
    uint32_t target = resolve(s.ops[i], s.line);
    return static_cast<int32_t>(target - pc);
  }

  void encode_stmt(const Stmt& s, std::vector<uint32_t>& out) {
    const std::string& m = s.mnemonic;
    auto emit = [&](const Instruction& in) { out.push_back(enc(in, s.line)); };

    static const std::map<std::string, Opcode> r_ops = {
        {"add", Opcode::Add}, {"sub", Opcode::Sub}, {"sll", Opcode::Sll},
        {"slt", Opcode::Slt}, {"sltu", Opcode::Sltu}, {"xor", Opcode::Xor},
        {"srl", Opcode::Srl}, {"sra", Opcode::Sra}, {"or", Opcode::Or}, {"and", Opcode::And}};
    static const std::map<std::string, Opcode> i_ops = {
        {"addi", Opcode::Addi}, {"slti", Opcode::Slti}, {"sltiu", Opcode::Sltiu},
        {"xori", Opcode::Xori}, {"ori", Opcode::Ori}, {"andi", Opcode::Andi},
        {"slli", Opcode::Slli}, {"srli", Opcode::Srli}, {"srai", Opcode::Srai}};
    static const std::map<std::string, Opcode> load_ops = {
        {"lb", Opcode::Lb}, {"lh", Opcode::Lh}, {"lw", Opcode::Lw},
        {"lbu", Opcode::Lbu}, {"lhu", Opcode::Lhu}};
    static const std::map<std::string, Opcode> store_ops = {
        {"sb", Opcode::Sb}, {"sh", Opcode::Sh}, {"sw", Opcode::Sw}};
    static const std::map<std::string, BranchCond> branch_ops = {
        {"beq", BranchCond::EQ}, {"bne", BranchCond::NE}, {"blt", BranchCond::LT},
        {"bge", BranchCond::GE}, {"bltu", BranchCond::LTU}, {"bgeu", BranchCond::GEU}};

    if (auto it = r_ops.find(m); it != r_ops.end()) {
      want_arity(s, 3);
      emit({it->second, want_reg(s, 0), want_reg(s, 1), want_reg(s, 2), 0});
      return;
    }
    if (auto it = i_ops.find(m); it != i_ops.end()) {
      want_arity(s, 3);
      emit({it->second, want_reg(s, 0), want_reg(s, 1), 0, want_imm(s, 2)});
      return;
    }
    if (auto it = load_ops.find(m); it != load_ops.end()) {
      want_arity(s, 3);  // rd, off, base
      emit({it->second, want_reg(s, 0), want_reg(s, 2), 0, want_imm(s, 1)});
      return;
    }
    if (auto it = store_ops.find(m); it != store_ops.end()) {
      want_arity(s, 3);  // data, off, base
      emit({it->second, 0, want_reg(s, 2), want_reg(s, 0), want_imm(s, 1)});
      return;
    }
    if (auto it = branch_ops.find(m); it != branch_ops.end()) {
      want_arity(s, 3);
      Instruction in{branch_opcode(it->second), 0, want_reg(s, 0), want_reg(s, 1), 0};
      in.imm = target_offset(s, 2, s.addr);
      emit(in);
      return;
    }
    if (m == "lui" || m == "auipc") {
      want_arity(s, 2);
      emit({m == "lui" ? Opcode::Lui : Opcode::Auipc, want_reg(s, 0), 0, 0, want_imm(s, 1)});
      return;
    }
    if (m == "jal") {
      // jal rd, target | jal target (rd = ra)
      uint8_t rd = 1;
      size_t ti = 0;
      if (s.ops.size() == 2) { rd = want_reg(s, 0); ti = 1; }
      else want_arity(s, 1);
      emit({Opcode::Jal, rd, 0, 0, target_offset(s, ti, s.addr)});
      return;
    }
    if (m == "j") {
      want_arity(s, 1);
      emit({Opcode::Jal, 0, 0, 0, target_offset(s, 0, s.addr)});
      return;
    }
    if (m == "jalr") {
      // jalr rd, off(rs1) | jalr rd, rs1, imm
      want_arity(s, 3);
      if (s.ops[1].kind == Operand::Kind::Reg)
        emit({Opcode::Jalr, want_reg(s, 0), want_reg(s, 1), 0, want_imm(s, 2)});
      else
        emit({Opcode::Jalr, want_reg(s, 0), want_reg(s, 2), 0, want_imm(s, 1)});
      return;
    }
    if (m == "ecall") {
      want_arity(s, 0);
      emit({Opcode::Ecall, 0, 0, 0, 0});
      return;
    }
    if (m == "nop") {
      want_arity(s, 0);
      emit({Opcode::Addi, 0, 0, 0, 0});
      return;
    }
    if (m == "mv") {
      want_arity(s, 2);
      emit({Opcode::Addi, want_reg(s, 0), want_reg(s, 1), 0, 0});
      return;
    }
    if (m == "ret") {
      want_arity(s, 0);
      emit({Opcode::Jalr, 0, 1, 0, 0});
      return;
    }
    if (m == "li") {
      want_arity(s, 2);
      uint8_t rd = want_reg(s, 0);
      uint32_t v = resolve(s.ops[1], s.line);
      if (s.words == 1) {
        emit({Opcode::Addi, rd, 0, 0, static_cast<int32_t>(v)});
      } else {
        uint32_t hi = (v + 0x800) >> 12 & 0xFFFFF;
        int32_t lo = static_cast<int32_t>(v - (hi << 12));
        emit({Opcode::Lui, rd, 0, 0, static_cast<int32_t>(hi)});
        emit({Opcode::Addi, rd, rd, 0, lo});
      }
      return;
    }
    if (m == "call") {
      want_arity(s, 1);
      uint32_t rel = resolve(s.ops[0], s.line) - s.addr;
      uint32_t hi = (rel + 0x800) >> 12 & 0xFFFFF;
      int32_t lo = static_cast<int32_t>(rel - (hi << 12));
      emit({Opcode::Auipc, 1, 0, 0, static_cast<int32_t>(hi)});
      emit({Opcode::Jalr, 1, 1, 0, lo});
      return;
    }
    parse_error(s.line, "unknown mnemonic '" + m + "'");
  }

  ProgramImage pass2() {
    ProgramImage img;
    img.base_addr = code_base;
    img.data_base = data_base;
    img.code.reserve(code_size_words);
    for (const auto& s : stmts) {
      size_t before = img.code.size();
      encode_stmt(s, img.code);
      if (img.code.size() - before != static_cast<size_t>(s.words))
        parse_error(s.line, "internal: statement size mismatch");
    }
    img.data.resize(data_size);
    for (const auto& c : data_chunks)
      std::copy(c.bytes.begin(), c.bytes.end(), img.data.begin() + (c.addr - data_base));
    if (!entry_label.empty()) {
      auto it = symbols.find(entry_label);
      if (it == symbols.end())
        throw AsmError(AsmError::Kind::UndefinedLabel, entry_line,
                       "undefined entry label '" + entry_label + "'");
      img.entry = it->second;
    } else {
      img.entry = img.base_addr;
    }
    try {
      validate_image(img);
    } catch (const std::invalid_argument& e) {
      parse_error(0, e.what());
    }
    return img;
  }
};

}  // namespace

AsmError::AsmError(Kind k, int line_no, const std::string& msg)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
      kind(k),
      line(line_no) {}

ProgramImage assemble(const std::string& source) {
  Assembler a;
  a.pass1(source);
  return a.pass2();
}

std::string disassemble(const ProgramImage& img) {
  std::vector<Instruction> instrs;
  instrs.reserve(img.code.size());
  for (size_t i = 0; i < img.code.size(); ++i) {
    try {
      instrs.push_back(decode(img.code[i]));
    } catch (const UnsupportedInstruction& e) {
      throw UnsupportedInstruction(e.word, img.addr_of(i));
    }
  }
  // synthesize labels at the entry and at every in-code control-flow target
  std::map<uint32_t, std::string> labels;
  auto mark = [&](uint32_t addr) {
    if (img.contains_code_addr(addr)) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "L_%08x", addr);
      labels.emplace(addr, buf);
    }
  };
  mark(img.entry);
  for (size_t i = 0; i < instrs.size(); ++i) {
    const Instruction& in = instrs[i];
    if (is_branch(in.op) || in.op == Opcode::Jal)
      mark(img.addr_of(i) + static_cast<uint32_t>(in.imm));
  }

  std::ostringstream out;
  char buf[96];
  std::snprintf(buf, sizeof buf, ".org 0x%08x", img.base_addr);
  out << buf << "\n";
  if (auto it = labels.find(img.entry); it != labels.end())
    out << ".entry " << it->second << "\n";
  for (size_t i = 0; i < instrs.size(); ++i) {
    uint32_t pc = img.addr_of(i);
    if (auto it = labels.find(pc); it != labels.end()) out << it->second << ":\n";
    const Instruction& in = instrs[i];
    if (is_branch(in.op) || in.op == Opcode::Jal) {
      uint32_t target = pc + static_cast<uint32_t>(in.imm);
      std::string tgt;
      if (auto it = labels.find(target); it != labels.end()) {
        tgt = it->second;
      } else {
        std::snprintf(buf, sizeof buf, "0x%08x", target);
        tgt = buf;
      }
      if (in.op == Opcode::Jal)
        out << "  jal x" << int(in.rd) << ", " << tgt << "\n";
      else
        out << "  " << opcode_name(in.op) << " x" << int(in.rs1) << ", x" << int(in.rs2) << ", "
            << tgt << "\n";
    } else {
      out << "  " << format_instruction(in) << "\n";
    }
  }
  if (!img.data.empty()) {
    out << ".data\n";
    std::snprintf(buf, sizeof buf, ".org 0x%08x", img.data_base);
    out << buf << "\n";
    for (size_t i = 0; i < img.data.size(); i += 8) {
      out << ".byte";
      for (size_t j = i; j < std::min(i + 8, img.data.size()); ++j) {
        std::snprintf(buf, sizeof buf, " 0x%02x", img.data[j]);
        out << buf << (j + 1 < std::min(i + 8, img.data.size()) ? "," : "");
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string save_image(const ProgramImage& img) {
  std::ostringstream out;
  char buf[16];
  out << "RVIMG v1\n";
  std::snprintf(buf, sizeof buf, "%08x", img.base_addr);
  out << "base " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%08x", img.entry);
  out << "entry " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%08x", img.data_base);
  out << "data_base " << buf << "\n";
  for (uint32_t w : img.code) {
    std::snprintf(buf, sizeof buf, "%08x", w);
    out << buf << "\n";
  }
  out << "DATA\n";
  for (uint8_t b : img.data) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out << buf << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void format_error(const std::string& msg) { throw FormatError(msg); }

bool parse_hex_exact(const std::string& t, size_t digits, uint32_t& out) {
  if (t.size() != digits) return false;
  uint32_t v = 0;
  for (char c : t) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else return false;  // lowercase only
    v = (v << 4) | static_cast<uint32_t>(d);
  }
  out = v;
  return true;
}

}  // namespace

ProgramImage load_image(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "RVIMG v1") format_error("bad or unknown image header");
  ProgramImage img;
  auto field = [&](const char* name) {
    if (!std::getline(in, line)) format_error(std::string("missing field ") + name);
    std::string prefix = std::string(name) + " ";
    if (line.rfind(prefix, 0) != 0) format_error(std::string("expected field ") + name);
    uint32_t v;
    if (!parse_hex_exact(line.substr(prefix.size()), 8, v))
      format_error(std::string("bad hex value for ") + name);
    return v;
  };
  img.base_addr = field("base");
  img.entry = field("entry");
  img.data_base = field("data_base");
  if (img.base_addr & 3u) format_error("base not 4-aligned");
  if (img.entry & 3u) format_error("entry not 4-aligned");
  bool in_data = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "DATA") {
      if (in_data) format_error("duplicate DATA marker");
      in_data = true;
      continue;
    }
    uint32_t v;
    if (!in_data) {
      if (!parse_hex_exact(line, 8, v)) format_error("bad code word line '" + line + "'");
      img.code.push_back(v);
    } else {
      if (!parse_hex_exact(line, 2, v)) format_error("bad data byte line '" + line + "'");
      img.data.push_back(static_cast<uint8_t>(v));
    }
  }
  if (!in_data) format_error("missing DATA marker");
  try {
    validate_image(img);
  } catch (const std::invalid_argument& e) {
    format_error(e.what());
  }
  return img;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write file: " + path);
  f << content;
}

}  // namespace rvobf
