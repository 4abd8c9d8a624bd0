// Keyed 1-bit hash H(address, key) shared bit-exactly by the obfuscator and
// the trusted-core model.
//
// Definition (fixed, portable):
//   mix(z) = splitmix64 finalizer:
//     z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//     z ^= z >> 27; z *= 0x94D049BB133111EB;
//     z ^= z >> 31                                    (all mod 2^64)
//   s1 = mix(k_lo ^ zext64(addr) ^ 0x9E3779B97F4A7C15)
//   s2 = mix(s1 ^ k_hi)
//   hash_bit = s2 & 1
//
// This is a balanced keyed mixer, not a cryptographic PRF; a production
// system would substitute a keyed cryptographic hash behind the same
// contract (determinism + balance). The simulated hash-unit latency is a
// pure scheduling parameter and never affects the bit value.
//
// Bulk evaluation over word-address ranges (the inner loop of flip-set
// scans and the statistical self-checks) has a scalar reference kernel and
// an AVX2 kernel selected at runtime; the two are equivalence-tested.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvobf/isa.hpp"

namespace rvobf {

// 128-bit program key, the sole secret of the scheme.
struct ProgramKey {
  uint64_t hi = 0;
  uint64_t lo = 0;
  bool operator==(const ProgramKey&) const = default;
};

// Hash-unit latency in cycles (the evaluation uses 8 and 16).
struct HashSpec {
  unsigned latency_cycles = 16;
};

// splitmix64 finalizer.
uint64_t mix64(uint64_t z);

// The keyed 1-bit hash. Deterministic; any address is hashable (callers
// apply it only to conditional-branch addresses).
int hash_bit(const ProgramKey& key, uint32_t addr);

// Bulk form: out[i] = hash_bit(key, addr0 + 4*i) for i in [0, count).
// Addresses wrap mod 2^32 like the scalar form. Dispatches to the best
// available kernel at runtime.
void hash_bits(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out);

// Name of the kernel hash_bits dispatches to ("avx2" or "scalar").
const char* hash_bits_backend();

namespace detail {
void hash_bits_scalar(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out);
// Defined for all builds; requires avx2_runtime_supported() to be called
// safely. Falls back to scalar when compiled without AVX2 support.
void hash_bits_avx2(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out);
bool avx2_runtime_supported();
}  // namespace detail

// Addresses of conditional branches in the image whose hash bit is 1,
// sorted ascending. Decodes every code word; propagates
// UnsupportedInstruction (with the offending address) for words outside
// the subset.
std::vector<uint32_t> flip_set(const ProgramKey& key, const ProgramImage& img);

// Parses 32 hex digits, most-significant first (k_hi then k_lo).
std::optional<ProgramKey> parse_key(const std::string& hex);
std::string key_to_hex(const ProgramKey& key);

// First 8 hex digits of a one-way digest of the key, for logs and reports.
std::string key_fingerprint(const ProgramKey& key);

}  // namespace rvobf
