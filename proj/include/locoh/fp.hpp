#pragma once

#include <cstdint>
#include <string>

#include "locoh/error.hpp"

namespace locoh {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Largest supported prime modulus.  Keeps a*b for a, b < p far below 2^32,
// which the elimination inner loops rely on to defer reduction.
inline constexpr u32 kMaxModulus = 97;

constexpr bool is_prime(u32 n) {
  if (n < 2) return false;
  for (u32 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void check_modulus(u32 p) {
  if (!is_prime(p) || p > kMaxModulus)
    throw Error("modulus must be a prime <= 97, got " + std::to_string(p));
}

inline u32 normalize_mod(i64 v, u32 p) {
  i64 r = v % i64(p);
  return u32(r < 0 ? r + i64(p) : r);
}

inline u32 pow_mod(u32 a, u32 e, u32 p) {
  u64 acc = 1, base = a % p;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return u32(acc);
}

inline u32 inv_mod(u32 a, u32 p) {
  a %= p;
  if (a == 0) throw Error("division by zero in GF(" + std::to_string(p) + ")");
  return pow_mod(a, p - 2, p);
}

// Reduction by a fixed modulus without hardware division.
// floor(t * magic / 2^32) equals floor(t / p) for every t < 2^25 when
// p <= 97; the worst-case margin a*(p-r) + b*(k+1) < 2^32 holds with room
// to spare (exhaustively tested for small t in the unit suite).
class Reducer {
 public:
  explicit Reducer(u32 p) : p_(p), magic_((u64(1) << 32) / p + 1) { check_modulus(p); }
  u32 modulus() const { return p_; }
  u32 operator()(u32 t) const { return t - u32((t * magic_) >> 32) * p_; }

 private:
  u32 p_;
  u64 magic_;
};

// A value in GF(p) carrying its modulus; arithmetic between mismatched
// moduli is a contract violation, not a silent coercion.
class FpScalar {
 public:
  FpScalar(i64 value, u32 modulus) {
    check_modulus(modulus);
    p_ = modulus;
    v_ = normalize_mod(value, p_);
  }
  u32 value() const { return v_; }
  u32 modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  FpScalar operator+(const FpScalar& o) const { return {i64(v_) + o.matched(p_), p_}; }
  FpScalar operator-(const FpScalar& o) const { return {i64(v_) - i64(o.matched(p_)), p_}; }
  FpScalar operator*(const FpScalar& o) const { return {i64(v_) * o.matched(p_), p_}; }
  FpScalar operator-() const { return {-i64(v_), p_}; }
  FpScalar inverse() const { return {i64(inv_mod(v_, p_)), p_}; }
  FpScalar operator/(const FpScalar& o) const {
    o.matched(p_);
    return *this * o.inverse();
  }
  bool operator==(const FpScalar& o) const { return p_ == o.p_ && v_ == o.v_; }
  bool operator!=(const FpScalar& o) const { return !(*this == o); }

 private:
  u32 matched(u32 p) const {
    if (p_ != p)
      throw Error("modulus mismatch: GF(" + std::to_string(p) + ") vs GF(" +
                  std::to_string(p_) + ")");
    return v_;
  }

  u32 v_ = 0;
  u32 p_ = 2;
};

}  // namespace locoh
