// AVX2 kernel for bulk hash-bit evaluation: four 64-bit mixer lanes per
// iteration. Compiled with -mavx2 when the compiler supports it; guarded by
// a CPUID check at dispatch time. Must stay bit-identical to
// hash_bits_scalar (equivalence-tested).
#include "rvobf/prf.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace rvobf::detail {

bool avx2_runtime_supported() {
#if defined(__AVX2__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if defined(__AVX2__)

namespace {

// 64x64 -> low 64 multiply; AVX2 has no mullo_epi64, compose from 32-bit
// partial products.
inline __m256i mullo64(__m256i a, __m256i b) {
  __m256i lo = _mm256_mul_epu32(a, b);
  __m256i hi = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(a, 32), b),
                                _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(hi, 32));
}

inline __m256i mix4(__m256i z) {
  const __m256i c1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ull));
  const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBull));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, c1);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, c2);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

}  // namespace

void hash_bits_avx2(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out) {
  const __m256i seed = _mm256_set1_epi64x(static_cast<long long>(key.lo ^ 0x9E3779B97F4A7C15ull));
  const __m256i khi = _mm256_set1_epi64x(static_cast<long long>(key.hi));
  size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    // Addresses wrap mod 2^32 before zero-extension, same as the scalar path.
    uint32_t a0 = addr0 + 4u * static_cast<uint32_t>(i);
    __m256i addr = _mm256_set_epi64x(static_cast<long long>(static_cast<uint32_t>(a0 + 12u)),
                                     static_cast<long long>(static_cast<uint32_t>(a0 + 8u)),
                                     static_cast<long long>(static_cast<uint32_t>(a0 + 4u)),
                                     static_cast<long long>(a0));
    __m256i s1 = mix4(_mm256_xor_si256(seed, addr));
    __m256i s2 = mix4(_mm256_xor_si256(s1, khi));
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), s2);
    out[i + 0] = static_cast<uint8_t>(lanes[0] & 1);
    out[i + 1] = static_cast<uint8_t>(lanes[1] & 1);
    out[i + 2] = static_cast<uint8_t>(lanes[2] & 1);
    out[i + 3] = static_cast<uint8_t>(lanes[3] & 1);
  }
  for (; i < count; ++i)
    out[i] = static_cast<uint8_t>(hash_bit(key, addr0 + 4u * static_cast<uint32_t>(i)));
}

#else

void hash_bits_avx2(const ProgramKey& key, uint32_t addr0, size_t count, uint8_t* out) {
  hash_bits_scalar(key, addr0, count, out);
}

#endif

}  // namespace rvobf::detail
