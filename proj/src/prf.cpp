#include "rvobf/prf.hpp"

#include <cctype>
#include <cstdio>

namespace rvobf {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

int hash_bit(const ProgramKey& key, uint32_t addr) {
  uint64_t s1 = mix64(key.lo ^ static_cast<uint64_t>(addr) ^ kGolden);
  uint64_t s2 = mix64(s1 ^ key.hi);
  return static_cast<int>(s2 & 1);
}

namespace detail {

void hash_bits_scalar(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out) {
  for (size_t i = 0; i < count; ++i)
    out[i] = static_cast<uint8_t>(hash_bit(key, addr0 + 4u * static_cast<uint32_t>(i)));
}

}  // namespace detail

namespace {

using KernelFn = void (*)(const ProgramKey&, uint32_t, size_t, uint8_t*);

KernelFn pick_kernel() {
  if (detail::avx2_runtime_supported()) return detail::hash_bits_avx2;
  return detail::hash_bits_scalar;
}

const KernelFn g_kernel = pick_kernel();

}  // namespace

void hash_bits(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out) {
  g_kernel(key, addr0, count, out);
}

const char* hash_bits_backend() {
  return g_kernel == detail::hash_bits_scalar ? "scalar" : "avx2";
}

std::vector<uint32_t> flip_set(const ProgramKey& key, const ProgramImage& img) {
  std::vector<uint8_t> bits(img.code.size());
  hash_bits(key, img.base_addr, img.code.size(), bits.data());
  std::vector<uint32_t> out;
  for (size_t i = 0; i < img.code.size(); ++i) {
    Instruction in;
    try {
      in = decode(img.code[i]);
    } catch (const UnsupportedInstruction& e) {
      throw UnsupportedInstruction(e.word, img.addr_of(i));
    }
    if (is_branch(in.op) && bits[i]) out.push_back(img.addr_of(i));
  }
  return out;
}

std::optional<ProgramKey> parse_key(const std::string& hex) {
  if (hex.size() != 32) return std::nullopt;
  uint64_t v[2] = {0, 0};
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < 16; ++i) {
      char c = hex[16 * half + i];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return std::nullopt;
      v[half] = (v[half] << 4) | static_cast<uint64_t>(d);
    }
  }
  return ProgramKey{v[0], v[1]};
}

std::string key_to_hex(const ProgramKey& key) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(key.hi),
                static_cast<unsigned long long>(key.lo));
  return buf;
}

std::string key_fingerprint(const ProgramKey& key) {
  uint64_t digest = mix64(mix64(key.lo ^ kGolden) ^ mix64(key.hi ^ ~kGolden));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(digest >> 32));
  return buf;
}

}  // namespace rvobf
