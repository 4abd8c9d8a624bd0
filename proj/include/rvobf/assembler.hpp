// Minimal RV32I assembler, disassembler, and the textual .rvimg image
// format, so benchmark programs can be authored, persisted, and inspected
// without an external toolchain.
//
// Source syntax (one statement per line, '#' comments):
//   labels:      name:                (may share a line with a statement)
//   directives:  .org ADDR   .entry LABEL   .data   .word V[,V...]
//                .byte V[,V...]   .ascii "text"
//   instructions in standard RV32I mnemonic syntax, ABI or numeric
//   register names; branch/jump targets are labels or absolute addresses.
//   pseudo-instructions: j, nop, li, mv, call, ret. li with a label operand
//   always expands to lui+addi so layout is fixed before symbol resolution.
//
// Image file format (.rvimg), line oriented, all hex lowercase:
//   RVIMG v1
//   base <8 hex>
//   entry <8 hex>
//   data_base <8 hex>
//   <one 8-hex-digit code word per line>
//   DATA
//   <one 2-hex-digit data byte per line>
#pragma once

#include <stdexcept>
#include <string>

#include "rvobf/isa.hpp"

namespace rvobf {

struct AsmError : std::runtime_error {
  enum class Kind { Parse, UndefinedLabel, DuplicateLabel, Range };
  Kind kind;
  int line;  // 1-based source line, 0 when not tied to a line
  AsmError(Kind k, int line_no, const std::string& msg);
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two-pass assembly; deterministic (identical source yields identical image).
ProgramImage assemble(const std::string& source);

// Inverse of assemble up to label naming: assemble(disassemble(img)) yields
// the identical word and byte sequence. Labels are synthesized as L_<addr>.
// Throws UnsupportedInstruction (with address) on undecodable words.
std::string disassemble(const ProgramImage& img);

// Lossless textual serialization; load(save(img)) == img bit-exactly.
// load_image throws FormatError on malformed or misaligned input.
std::string save_image(const ProgramImage& img);
ProgramImage load_image(const std::string& text);

// Small file helpers shared by the CLI and tests.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rvobf
