// The obfuscation pass: flips exactly the conditional branches selected by
// the keyed hash, preserving layout, plus the mask sidecar for the
// mask-based core and the static pairing verifier.
//
// Mask sidecar format (.mask), line oriented:
//   RVMASK v1
//   base <8 hex>
//   bits <hex string, one bit per code word, 8 words per hex byte pair,
//         most significant bit = lowest address; trailing pad bits zero>
//   encrypted: none
//
// The mask ships alongside the OBFUSCATED image; the trusted mask-based
// core XORs the static branch outcome with the mask bit. The `encrypted`
// field is a format hook only: real deployments would keep masks encrypted
// in memory, which this model does not implement.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvobf/isa.hpp"
#include "rvobf/prf.hpp"

namespace rvobf {

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ObfuscationReport {
  size_t total_branches = 0;
  size_t flipped = 0;
  std::vector<uint32_t> flipped_addresses;  // sorted
  std::string key_fingerprint;              // never the key itself
};

// One reversal bit per code word, indexed by (addr - base)/4.
// Invariant: bit may be 1 only at conditional-branch positions.
struct MaskStream {
  uint32_t base = 0;
  std::vector<uint8_t> bits;  // 0 or 1 per word
  bool operator==(const MaskStream&) const = default;
};

// Replaces every word whose address is in flip_set(key, img) with the
// encoding of its complemented branch; everything else (layout, data,
// entry) is untouched.
std::pair<ProgramImage, ObfuscationReport> obfuscate_image(const ProgramImage& img,
                                                           const ProgramKey& key);

// Mask bits are 1 exactly at flip-set positions of the original image.
MaskStream make_mask(const ProgramImage& img_original, const ProgramKey& key);

// Checks the MaskStream invariants against an image (same base, one bit per
// word, set bits only at branch positions). Throws FormatError on violation.
void validate_mask(const MaskStream& mask, const ProgramImage& img);

// True iff for every address: non-branch words identical, and branch words
// satisfy obf == original when hash_bit = 0, obf == complement when
// hash_bit = 1. Differences in code length or base are ShapeMismatch;
// entry/data differences make the check false.
bool verify_pairing(const ProgramImage& original, const ProgramImage& obf, const ProgramKey& key);

std::string save_mask(const MaskStream& mask);
MaskStream load_mask(const std::string& text);

// The on-disk encoding pads the bit stream to whole hex bytes; this drops
// the padding for an image of `words` code words. Throws FormatError if the
// stream is too short, over-long, or has nonzero pad bits.
MaskStream trim_mask(MaskStream mask, size_t words);

std::string report_to_text(const ObfuscationReport& report);

}  // namespace rvobf
