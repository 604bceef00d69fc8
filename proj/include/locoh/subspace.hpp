#pragma once

#include <cstddef>
#include <vector>

#include "locoh/eliminator.hpp"
#include "locoh/fp.hpp"
#include "locoh/fp_matrix.hpp"

namespace locoh {

// Subspace of GF(p)^n held as its reduced echelon basis.  Two subspaces are
// equal iff their stored rows are identical, so == is a plain comparison.
class Subspace {
 public:
  static Subspace zero(u32 p, std::size_t ambient) {
    check_modulus(p);
    return Subspace(p, ambient, {});
  }

  static Subspace full(u32 p, std::size_t ambient) {
    check_modulus(p);
    std::vector<std::vector<u32>> rows(ambient, std::vector<u32>(ambient, 0));
    for (std::size_t i = 0; i < ambient; ++i) rows[i][i] = 1;
    return Subspace(p, ambient, std::move(rows));
  }

  static Subspace from_vectors(u32 p, std::size_t ambient,
                               const std::vector<std::vector<u32>>& vectors) {
    check_modulus(p);
    RrefAccumulator acc(p, ambient);
    for (const auto& v : vectors) {
      if (v.size() != ambient) throw Error("from_vectors: length mismatch");
      acc.add_row(v);
    }
    return Subspace(p, ambient, acc.reduced_rows());
  }

  static Subspace from_accumulator(RrefAccumulator& acc) {
    return Subspace(acc.modulus(), acc.cols(), acc.reduced_rows());
  }

  u32 modulus() const { return p_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<std::vector<u32>>& basis_rows() const { return rows_; }
  const std::vector<u32>& pivot_columns() const { return pivots_; }

  FpMatrix basis_matrix() const {
    std::vector<std::vector<i64>> rows;
    rows.reserve(rows_.size());
    for (const auto& r : rows_) rows.emplace_back(r.begin(), r.end());
    if (rows.empty()) return FpMatrix::zero(p_, 0, ambient_);
    return FpMatrix::from_rows(p_, rows);
  }

  // Canonical residual of v modulo this subspace; zero iff v is a member.
  std::vector<u32> reduce(std::vector<u32> v) const {
    if (v.size() != ambient_) throw Error("reduce: length mismatch");
    for (auto& x : v) x %= p_;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const u32 c = v[pivots_[k]];
      if (!c) continue;
      const u32 m = p_ - c;
      const auto& row = rows_[k];
      for (std::size_t j = 0; j < ambient_; ++j) v[j] = (v[j] + m * row[j]) % p_;
    }
    return v;
  }

  bool contains(const std::vector<u32>& v) const {
    auto r = reduce(v);
    for (u32 x : r)
      if (x) return false;
    return true;
  }

  bool contains(const Subspace& other) const {
    if (other.p_ != p_ || other.ambient_ != ambient_) return false;
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

  bool operator==(const Subspace& o) const {
    return p_ == o.p_ && ambient_ == o.ambient_ && rows_ == o.rows_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

 private:
  Subspace(u32 p, std::size_t ambient, std::vector<std::vector<u32>> rows)
      : p_(p), ambient_(ambient), rows_(std::move(rows)) {
    pivots_.reserve(rows_.size());
    for (const auto& r : rows_) {
      std::size_t c = 0;
      while (c < ambient_ && r[c] == 0) ++c;
      pivots_.push_back(u32(c));
    }
  }

  u32 p_;
  std::size_t ambient_;
  std::vector<std::vector<u32>> rows_;
  std::vector<u32> pivots_;
};

inline Subspace row_space(const FpMatrix& m) {
  RrefAccumulator acc(m.modulus(), m.cols());
  m.accumulate_rows(acc);
  return Subspace::from_accumulator(acc);
}

inline Subspace image_basis(const FpMatrix& m) { return row_space(m.transpose()); }

// Null space {x : m x = 0}, canonicalized.
inline Subspace kernel_basis(const FpMatrix& m) {
  RrefAccumulator acc(m.modulus(), m.cols());
  m.accumulate_rows(acc);
  return Subspace::from_vectors(m.modulus(), m.cols(), acc.kernel_generators());
}

// Functionals vanishing on W, as row vectors of the same length.
inline Subspace annihilator(const Subspace& w) {
  if (w.dim() == 0) return Subspace::full(w.modulus(), w.ambient_dim());
  return kernel_basis(w.basis_matrix());
}

inline Subspace sum_subspace(const Subspace& a, const Subspace& b) {
  if (a.modulus() != b.modulus() || a.ambient_dim() != b.ambient_dim())
    throw Error("sum_subspace: mismatched ambient spaces");
  RrefAccumulator acc(a.modulus(), a.ambient_dim());
  for (const auto& r : a.basis_rows()) acc.add_row(r);
  for (const auto& r : b.basis_rows()) acc.add_row(r);
  return Subspace::from_accumulator(acc);
}

inline Subspace intersect_subspace(const Subspace& a, const Subspace& b) {
  if (a.modulus() != b.modulus() || a.ambient_dim() != b.ambient_dim())
    throw Error("intersect_subspace: mismatched ambient spaces");
  return annihilator(sum_subspace(annihilator(a), annihilator(b)));
}

// Rows of `whole` whose pivots fall outside `sub`; they represent a basis of
// whole/sub.  Requires sub to lie inside whole, which forces the pivot
// columns of sub to be a subset of those of whole.
inline std::vector<std::vector<u32>> quotient_representatives(const Subspace& sub,
                                                             const Subspace& whole) {
  if (!whole.contains(sub)) throw Error("quotient_representatives: not a subspace");
  std::vector<std::vector<u32>> out;
  const auto& sp = sub.pivot_columns();
  std::size_t k = 0;
  for (std::size_t i = 0; i < whole.dim(); ++i) {
    const u32 piv = whole.pivot_columns()[i];
    if (k < sp.size() && sp[k] == piv) {
      ++k;
      continue;
    }
    out.push_back(whole.basis_rows()[i]);
  }
  return out;
}

}  // namespace locoh
