#include "rvobf/obfuscate.hpp"

#include <cstdio>
#include <sstream>

#include "rvobf/assembler.hpp"

namespace rvobf {

std::pair<ProgramImage, ObfuscationReport> obfuscate_image(const ProgramImage& img,
                                                           const ProgramKey& key) {
  ProgramImage out = img;
  ObfuscationReport rep;
  rep.key_fingerprint = key_fingerprint(key);
  std::vector<uint8_t> bits(img.code.size());
  hash_bits(key, img.base_addr, img.code.size(), bits.data());
  for (size_t i = 0; i < img.code.size(); ++i) {
    Instruction in;
    try {
      in = decode(img.code[i]);
    } catch (const UnsupportedInstruction& e) {
      throw UnsupportedInstruction(e.word, img.addr_of(i));
    }
    if (!is_branch(in.op)) continue;
    ++rep.total_branches;
    if (bits[i]) {
      out.code[i] = encode(complement_branch(in));
      rep.flipped_addresses.push_back(img.addr_of(i));
    }
  }
  rep.flipped = rep.flipped_addresses.size();
  return {std::move(out), std::move(rep)};
}

MaskStream make_mask(const ProgramImage& img_original, const ProgramKey& key) {
  MaskStream m;
  m.base = img_original.base_addr;
  m.bits.assign(img_original.code.size(), 0);
  for (uint32_t addr : flip_set(key, img_original))
    m.bits[(addr - img_original.base_addr) / 4] = 1;
  return m;
}

void validate_mask(const MaskStream& mask, const ProgramImage& img) {
  if (mask.base != img.base_addr) throw FormatError("mask base does not match image base");
  if (mask.bits.size() != img.code.size())
    throw FormatError("mask length does not match image code word count");
  for (size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i] > 1) throw FormatError("mask bit out of range");
    if (mask.bits[i] && !is_branch_word(img.code[i]))
      throw FormatError("mask bit set at non-branch position");
  }
}

bool verify_pairing(const ProgramImage& original, const ProgramImage& obf, const ProgramKey& key) {
  if (original.code.size() != obf.code.size() || original.base_addr != obf.base_addr)
    throw ShapeMismatch("images differ in code length or base address");
  if (original.entry != obf.entry || original.data_base != obf.data_base ||
      original.data != obf.data)
    return false;
  std::vector<uint8_t> bits(original.code.size());
  hash_bits(key, original.base_addr, original.code.size(), bits.data());
  for (size_t i = 0; i < original.code.size(); ++i) {
    Instruction in;
    try {
      in = decode(original.code[i]);
    } catch (const UnsupportedInstruction& e) {
      throw UnsupportedInstruction(e.word, original.addr_of(i));
    }
    uint32_t expect = original.code[i];
    if (is_branch(in.op) && bits[i]) expect = encode(complement_branch(in));
    if (obf.code[i] != expect) return false;
  }
  return true;
}

std::string save_mask(const MaskStream& mask) {
  std::ostringstream out;
  char buf[16];
  out << "RVMASK v1\n";
  std::snprintf(buf, sizeof buf, "%08x", mask.base);
  out << "base " << buf << "\n";
  out << "bits ";
  for (size_t i = 0; i < mask.bits.size(); i += 8) {
    unsigned byte = 0;
    for (size_t j = 0; j < 8; ++j)
      if (i + j < mask.bits.size() && mask.bits[i + j]) byte |= 0x80u >> j;
    std::snprintf(buf, sizeof buf, "%02x", byte);
    out << buf;
  }
  out << "\n";
  out << "encrypted: none\n";
  return out.str();
}

MaskStream load_mask(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "RVMASK v1") throw FormatError("bad mask header");
  MaskStream m;
  if (!std::getline(in, line) || line.rfind("base ", 0) != 0)
    throw FormatError("missing mask base field");
  {
    const std::string hex = line.substr(5);
    if (hex.size() != 8) throw FormatError("bad mask base value");
    uint32_t v = 0;
    for (char c : hex) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else throw FormatError("bad mask base value");
      v = (v << 4) | static_cast<uint32_t>(d);
    }
    m.base = v;
  }
  if (!std::getline(in, line) || line.rfind("bits", 0) != 0)
    throw FormatError("missing mask bits field");
  std::string hex = line.size() > 5 ? line.substr(5) : "";
  if (hex.size() % 2 != 0) throw FormatError("mask bits must be whole hex bytes");
  for (size_t i = 0; i < hex.size(); i += 2) {
    unsigned byte = 0;
    for (int j = 0; j < 2; ++j) {
      char c = hex[i + j];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else throw FormatError("bad hex digit in mask bits");
      byte = (byte << 4) | static_cast<unsigned>(d);
    }
    for (int j = 0; j < 8; ++j) m.bits.push_back((byte >> (7 - j)) & 1);
  }
  if (!std::getline(in, line) || line != "encrypted: none")
    throw FormatError("missing or unsupported encrypted field");
  return m;
}

MaskStream trim_mask(MaskStream mask, size_t words) {
  if (mask.bits.size() < words) throw FormatError("mask bit stream shorter than image");
  if (mask.bits.size() - words >= 8) throw FormatError("mask bit stream longer than image");
  for (size_t i = words; i < mask.bits.size(); ++i)
    if (mask.bits[i]) throw FormatError("nonzero padding bit in mask");
  mask.bits.resize(words);
  return mask;
}

std::string report_to_text(const ObfuscationReport& rep) {
  std::ostringstream out;
  out << "key_fingerprint " << rep.key_fingerprint << "\n";
  out << "total_branches " << rep.total_branches << "\n";
  out << "flipped " << rep.flipped << "\n";
  char buf[16];
  for (uint32_t a : rep.flipped_addresses) {
    std::snprintf(buf, sizeof buf, "%08x", a);
    out << "flip " << buf << "\n";
  }
  return out.str();
}

}  // namespace rvobf
