#pragma once

#include <random>

#include "locoh/fp.hpp"

namespace locoh {

// Deterministic cross-platform randomness: raw mt19937_64 draws only.
// Distribution objects are implementation-defined and would break the
// byte-identical-reports contract between standard libraries.
class SeededRng {
 public:
  explicit SeededRng(u64 seed) : eng_(seed) {}
  u64 raw() { return eng_(); }
  // Modulo bias is immaterial: n is tiny against 2^64 in every use.
  u32 below(u32 n) { return u32(eng_() % n); }
  u32 fp_value(u32 p) { return below(p); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace locoh
