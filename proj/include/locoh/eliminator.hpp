#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "locoh/fp.hpp"

namespace locoh {

// Widest row the elimination machinery accepts.
inline constexpr std::size_t kAmbientCap = std::size_t(1) << 24;

// Streaming reduced-row-echelon accumulator over GF(p).
//
// Rows arrive one at a time; each is reduced against the pivots found so far
// and either vanishes or contributes a new pivot with leading entry 1.
// Back-substitution above pivots is deferred until an observer needs fully
// reduced data.  The reduced basis of a row space is unique, so observers see
// results independent of arrival order beyond the space itself.
//
// p = 2 keeps pivot rows bit-packed and reduces with word XOR.  Other moduli
// keep pivot rows as bytes (p <= 97) and reduce incoming rows in a u32
// scratch where products accumulate without per-element reduction; the
// scratch is flushed just often enough to stay below the Reducer's bound.
class RrefAccumulator {
 public:
  RrefAccumulator(u32 modulus, std::size_t cols)
      : p_(modulus), red_(modulus), cols_(cols), gf2_(modulus == 2) {
    if (cols_ > kAmbientCap)
      throw CapError("row width " + std::to_string(cols_) + " exceeds ambient cap");
    words_ = gf2_ ? (cols_ + 63) / 64 : 0;
    flush_period_ = gf2_ ? 0 : ((1u << 25) - p_) / ((p_ - 1) * (p_ - 1));
  }

  std::size_t cols() const { return cols_; }
  u32 modulus() const { return p_; }
  std::size_t rank() const { return pivots_.size(); }
  bool saturated() const { return pivots_.size() == cols_; }
  const std::vector<u32>& pivot_columns() const { return pivots_; }  // ascending

  std::vector<u32> free_columns() const {
    std::vector<u32> out;
    out.reserve(cols_ - pivots_.size());
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (k < pivots_.size() && pivots_[k] == c) {
        ++k;
        continue;
      }
      out.push_back(u32(c));
    }
    return out;
  }

  // Returns true when the row enlarged the accumulated space.
  bool add_row(const std::vector<u32>& vals) {
    if (vals.size() != cols_) throw Error("eliminator: row length mismatch");
    if (saturated()) return false;
    if (gf2_) {
      wscr_.assign(words_, 0);
      for (std::size_t i = 0; i < cols_; ++i)
        if (vals[i] & 1u) wscr_[i >> 6] |= u64(1) << (i & 63);
      return absorb_gf2();
    }
    uscr_.resize(cols_);
    for (std::size_t i = 0; i < cols_; ++i) uscr_[i] = vals[i] % p_;
    return absorb_general();
  }

  // Entries are (column, value); duplicate columns accumulate.
  bool add_sparse_row(const std::vector<std::pair<u32, u32>>& entries) {
    if (saturated()) return false;
    if (gf2_) {
      wscr_.assign(words_, 0);
      for (auto [c, v] : entries) {
        if (c >= cols_) throw Error("eliminator: sparse column out of range");
        if (v & 1u) wscr_[c >> 6] ^= u64(1) << (c & 63);
      }
      return absorb_gf2();
    }
    uscr_.assign(cols_, 0);
    for (auto [c, v] : entries) {
      if (c >= cols_) throw Error("eliminator: sparse column out of range");
      uscr_[c] = red_(uscr_[c] + v % p_);
    }
    return absorb_general();
  }

  // Canonical representative of `row` modulo the accumulated row space;
  // `row` is normalized mod p in place.
  void reduce_row(std::vector<u32>& row) {
    if (row.size() != cols_) throw Error("eliminator: row length mismatch");
    finalize();
    if (gf2_) {
      wscr_.assign(words_, 0);
      for (std::size_t i = 0; i < cols_; ++i)
        if (row[i] & 1u) wscr_[i >> 6] |= u64(1) << (i & 63);
      reduce_scratch_gf2();
      for (std::size_t i = 0; i < cols_; ++i) row[i] = wscr_[i >> 6] >> (i & 63) & 1;
      return;
    }
    uscr_.resize(cols_);
    for (std::size_t i = 0; i < cols_; ++i) uscr_[i] = row[i] % p_;
    reduce_scratch_general();
    for (std::size_t i = 0; i < cols_; ++i) row[i] = uscr_[i];
  }

  // Reduced rows in pivot-column order; this is THE reduced basis of the
  // accumulated row space.
  std::vector<std::vector<u32>> reduced_rows() {
    finalize();
    std::vector<std::vector<u32>> out;
    out.reserve(pivots_.size());
    for (std::size_t k = 0; k < pivots_.size(); ++k) out.push_back(unpack(k));
    return out;
  }

  // Standard kernel generators of the accumulated rows viewed as a matrix:
  // one per free column f (ascending), with x[f] = 1 and x[p_j] = -R[j][f].
  // They span the kernel but are not themselves in reduced form.
  std::vector<std::vector<u32>> kernel_generators() {
    finalize();
    const auto free = free_columns();
    std::vector<std::vector<u32>> out;
    out.reserve(free.size());
    for (u32 f : free) {
      std::vector<u32> x(cols_, 0);
      x[f] = 1;
      for (std::size_t k = 0; k < pivots_.size(); ++k) {
        const u32 v = value_at(k, f);
        if (v) x[pivots_[k]] = p_ - v;
      }
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  bool absorb_general() {
    u32 since_flush = 0;
    const std::size_t npiv = pivots_.size();
    for (std::size_t k = 0; k < npiv; ++k) {
      const u32 c = pivots_[k];
      const u32 v = red_(uscr_[c]);
      if (v == 0) {
        uscr_[c] = 0;
        continue;
      }
      axpy_general(c, p_ - v, brows_[prow_[k]].data());
      if (++since_flush >= flush_period_) {
        for (auto& x : uscr_) x = red_(x);
        since_flush = 0;
      }
    }
    std::size_t lead = cols_;
    for (std::size_t i = 0; i < cols_; ++i) {
      uscr_[i] = red_(uscr_[i]);
      if (uscr_[i] != 0 && lead == cols_) lead = i;
    }
    if (lead == cols_) return false;
    const u32 inv = inv_mod(uscr_[lead], p_);
    std::vector<u8> row(cols_, 0);
    for (std::size_t i = lead; i < cols_; ++i) row[i] = u8(red_(uscr_[i] * inv));
    insert_pivot(u32(lead), u32(brows_.size()));
    brows_.push_back(std::move(row));
    return true;
  }

  bool absorb_gf2() {
    const std::size_t npiv = pivots_.size();
    for (std::size_t k = 0; k < npiv; ++k) {
      const u32 c = pivots_[k];
      if (!(wscr_[c >> 6] >> (c & 63) & 1)) continue;
      const u64* pr = wrows_[prow_[k]].data();
      for (std::size_t w = c >> 6; w < words_; ++w) wscr_[w] ^= pr[w];
    }
    std::size_t lead = cols_;
    for (std::size_t w = 0; w < words_; ++w)
      if (wscr_[w]) {
        lead = (w << 6) + std::size_t(std::countr_zero(wscr_[w]));
        break;
      }
    if (lead == cols_) return false;
    insert_pivot(u32(lead), u32(wrows_.size()));
    wrows_.push_back(wscr_);
    return true;
  }

  void axpy_general(std::size_t from, u32 coef, const u8* pr) {
    u32* dst = uscr_.data();
    for (std::size_t i = from; i < cols_; ++i) dst[i] += coef * u32(pr[i]);
  }

  void reduce_scratch_general() {
    u32 since_flush = 0;
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
      const u32 c = pivots_[k];
      const u32 v = red_(uscr_[c]);
      if (v == 0) {
        uscr_[c] = 0;
        continue;
      }
      axpy_general(c, p_ - v, brows_[prow_[k]].data());
      if (++since_flush >= flush_period_) {
        for (auto& x : uscr_) x = red_(x);
        since_flush = 0;
      }
    }
    for (auto& x : uscr_) x = red_(x);
  }

  void reduce_scratch_gf2() {
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
      const u32 c = pivots_[k];
      if (!(wscr_[c >> 6] >> (c & 63) & 1)) continue;
      const u64* pr = wrows_[prow_[k]].data();
      for (std::size_t w = c >> 6; w < words_; ++w) wscr_[w] ^= pr[w];
    }
  }

  void insert_pivot(u32 col, u32 storage_index) {
    const auto it = std::lower_bound(pivots_.begin(), pivots_.end(), col);
    const std::size_t pos = std::size_t(it - pivots_.begin());
    pivots_.insert(it, col);
    prow_.insert(prow_.begin() + std::ptrdiff_t(pos), storage_index);
    reduced_above_ = false;
  }

  // Clear entries above every pivot; right-to-left so subtracted rows are
  // already final.  Idempotent.
  void finalize() {
    if (reduced_above_) return;
    const std::size_t npiv = pivots_.size();
    for (std::size_t k = npiv; k-- > 0;) {
      if (gf2_) {
        u64* r = wrows_[prow_[k]].data();
        for (std::size_t j = k + 1; j < npiv; ++j) {
          const u32 c = pivots_[j];
          if (!(r[c >> 6] >> (c & 63) & 1)) continue;
          const u64* rj = wrows_[prow_[j]].data();
          for (std::size_t w = c >> 6; w < words_; ++w) r[w] ^= rj[w];
        }
      } else {
        u8* r = brows_[prow_[k]].data();
        for (std::size_t j = k + 1; j < npiv; ++j) {
          const u32 c = pivots_[j];
          const u32 v = r[c];
          if (!v) continue;
          const u8* rj = brows_[prow_[j]].data();
          const u32 coef = p_ - v;
          for (std::size_t i = c; i < cols_; ++i)
            r[i] = u8(red_(u32(r[i]) + coef * u32(rj[i])));
        }
      }
    }
    reduced_above_ = true;
  }

  u32 value_at(std::size_t k, std::size_t col) const {
    if (gf2_) return u32(wrows_[prow_[k]][col >> 6] >> (col & 63) & 1);
    return brows_[prow_[k]][col];
  }

  std::vector<u32> unpack(std::size_t k) const {
    std::vector<u32> out(cols_);
    if (gf2_) {
      const u64* r = wrows_[prow_[k]].data();
      for (std::size_t i = 0; i < cols_; ++i) out[i] = r[i >> 6] >> (i & 63) & 1;
    } else {
      const u8* r = brows_[prow_[k]].data();
      for (std::size_t i = 0; i < cols_; ++i) out[i] = r[i];
    }
    return out;
  }

  u32 p_;
  Reducer red_;
  std::size_t cols_;
  bool gf2_;
  std::size_t words_ = 0;
  u32 flush_period_ = 0;
  std::vector<std::vector<u8>> brows_;
  std::vector<std::vector<u64>> wrows_;
  std::vector<u32> pivots_;
  std::vector<u32> prow_;
  bool reduced_above_ = true;
  std::vector<u32> uscr_;
  std::vector<u64> wscr_;
};

}  // namespace locoh
