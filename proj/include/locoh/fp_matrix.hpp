#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locoh/eliminator.hpp"
#include "locoh/fp.hpp"

namespace locoh {

inline constexpr std::size_t kDenseDimCap = std::size_t(1) << 13;
// Matrices beyond this many entries are kept sparse.
inline constexpr std::size_t kSparseThreshold = 100000;

// Immutable matrix over GF(p).  Dense storage is row-major; sparse storage
// keeps per-row (col, value) lists sorted by column with no explicit zeros.
// Entries are always reduced mod p.
class FpMatrix {
 public:
  using SparseRow = std::vector<std::pair<u32, u32>>;

  static FpMatrix zero(u32 p, std::size_t rows, std::size_t cols) {
    check_modulus(p);
    check_dims(rows, cols, prefer_sparse(rows, cols));
    FpMatrix m(p, rows, cols, prefer_sparse(rows, cols));
    return m;
  }

  static FpMatrix identity(u32 p, std::size_t n) {
    FpMatrix m = zero(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.poke(i, i, 1);
    return m;
  }

  static FpMatrix from_rows(u32 p, const std::vector<std::vector<i64>>& rows) {
    check_modulus(p);
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    for (const auto& row : rows)
      if (row.size() != c) throw Error("from_rows: ragged rows");
    FpMatrix m = zero(p, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.poke(i, j, normalize_mod(rows[i][j], p));
    m.compact();
    return m;
  }

  static FpMatrix from_dense(u32 p, std::size_t rows, std::size_t cols,
                             std::vector<u32> values) {
    check_modulus(p);
    if (values.size() != rows * cols) throw Error("from_dense: size mismatch");
    check_dims(rows, cols, false);
    FpMatrix m(p, rows, cols, false);
    for (auto& v : values) v %= p;
    m.dense_ = std::move(values);
    return m;
  }

  static FpMatrix from_sparse_rows(u32 p, std::size_t rows, std::size_t cols,
                                   std::vector<SparseRow> data) {
    check_modulus(p);
    if (data.size() != rows) throw Error("from_sparse_rows: row count mismatch");
    check_dims(rows, cols, true);
    FpMatrix m(p, rows, cols, true);
    for (auto& row : data) {
      for (auto& [c, v] : row) {
        if (c >= cols) throw Error("from_sparse_rows: column out of range");
        v %= p;
      }
      std::sort(row.begin(), row.end());
      SparseRow merged;
      for (auto [c, v] : row) {
        if (!merged.empty() && merged.back().first == c)
          merged.back().second = (merged.back().second + v) % p;
        else
          merged.emplace_back(c, v);
      }
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [](const auto& e) { return e.second == 0; }),
                   merged.end());
      row = std::move(merged);
    }
    m.rows_sparse_ = std::move(data);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  u32 modulus() const { return p_; }
  bool is_sparse() const { return sparse_; }

  std::size_t nnz() const {
    std::size_t n = 0;
    if (sparse_)
      for (const auto& r : rows_sparse_) n += r.size();
    else
      for (u32 v : dense_) n += v != 0;
    return n;
  }

  u32 at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw Error("matrix index out of range");
    if (!sparse_) return dense_[r * cols_ + c];
    const auto& row = rows_sparse_[r];
    const auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(u32(c), u32(0)),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return it != row.end() && it->first == c ? it->second : 0;
  }

  // Invoke fn(col, value) over non-zero entries of row r, ascending col.
  template <class Fn>
  void for_each_in_row(std::size_t r, Fn&& fn) const {
    if (sparse_) {
      for (auto [c, v] : rows_sparse_[r]) fn(c, v);
    } else {
      const u32* base = dense_.data() + r * cols_;
      for (std::size_t c = 0; c < cols_; ++c)
        if (base[c]) fn(u32(c), base[c]);
    }
  }

  std::vector<u32> row_dense(std::size_t r) const {
    std::vector<u32> out(cols_, 0);
    for_each_in_row(r, [&](u32 c, u32 v) { out[c] = v; });
    return out;
  }

  FpMatrix transpose() const {
    FpMatrix t(p_, cols_, rows_, sparse_);
    if (!sparse_) {
      t.dense_.assign(rows_ * cols_, 0);
      for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.dense_[c * rows_ + r] = dense_[r * cols_ + c];
      return t;
    }
    t.rows_sparse_.assign(cols_, {});
    std::vector<std::size_t> counts(cols_, 0);
    for (const auto& row : rows_sparse_)
      for (auto [c, v] : row) ++counts[c];
    for (std::size_t c = 0; c < cols_; ++c) t.rows_sparse_[c].reserve(counts[c]);
    for (std::size_t r = 0; r < rows_; ++r)
      for (auto [c, v] : rows_sparse_[r]) t.rows_sparse_[c].emplace_back(u32(r), v);
    return t;
  }

  FpMatrix operator*(const FpMatrix& o) const {
    if (p_ != o.p_) throw Error("matrix product: modulus mismatch");
    if (cols_ != o.rows_) throw Error("matrix product: shape mismatch");
    Reducer red(p_);
    std::vector<SparseRow> out(rows_);
    std::vector<u32> scratch(o.cols_, 0);
    std::size_t total = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      std::fill(scratch.begin(), scratch.end(), 0);
      for_each_in_row(r, [&](u32 k, u32 v) {
        o.for_each_in_row(k, [&](u32 c, u32 w) { scratch[c] = red(scratch[c] + v * w); });
      });
      SparseRow row;
      for (std::size_t c = 0; c < o.cols_; ++c)
        if (scratch[c]) row.emplace_back(u32(c), scratch[c]);
      total += row.size();
      out[r] = std::move(row);
    }
    FpMatrix result = from_sparse_rows(p_, rows_, o.cols_, std::move(out));
    if (total <= kSparseThreshold && rows_ <= kDenseDimCap && o.cols_ <= kDenseDimCap)
      result.densify();
    return result;
  }

  FpMatrix operator+(const FpMatrix& o) const { return combined(o, 1); }
  FpMatrix operator-(const FpMatrix& o) const { return combined(o, p_ - 1); }

  FpMatrix scaled(u32 c) const {
    c %= p_;
    FpMatrix m(*this);
    if (!sparse_) {
      for (auto& v : m.dense_) v = v * c % p_;
    } else {
      for (auto& row : m.rows_sparse_)
        for (auto& [col, v] : row) v = v * c % p_;
      if (c == 0)
        for (auto& row : m.rows_sparse_) row.clear();
    }
    return m;
  }

  std::vector<u32> apply(const std::vector<u32>& x) const {
    if (x.size() != cols_) throw Error("matrix apply: length mismatch");
    std::vector<u32> y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      u64 acc = 0;
      for_each_in_row(r, [&](u32 c, u32 v) { acc += u64(v) * (x[c] % p_); });
      y[r] = u32(acc % p_);
    }
    return y;
  }

  bool is_zero() const { return nnz() == 0; }

  bool operator==(const FpMatrix& o) const {
    if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (at(r, c) != o.at(r, c)) return false;
    return true;
  }
  bool operator!=(const FpMatrix& o) const { return !(*this == o); }

  // Feed all rows into an accumulator (rank, kernels, reduced form).
  void accumulate_rows(RrefAccumulator& acc) const {
    std::vector<std::pair<u32, u32>> sparse_row;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (sparse_) {
        acc.add_sparse_row(rows_sparse_[r]);
      } else {
        sparse_row.clear();
        const u32* base = dense_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c)
          if (base[c]) sparse_row.emplace_back(u32(c), base[c]);
        acc.add_sparse_row(sparse_row);
      }
    }
  }

 private:
  FpMatrix(u32 p, std::size_t rows, std::size_t cols, bool sparse)
      : p_(p), rows_(rows), cols_(cols), sparse_(sparse) {
    if (sparse_)
      rows_sparse_.assign(rows_, {});
    else
      dense_.assign(rows_ * cols_, 0);
  }

  static bool prefer_sparse(std::size_t rows, std::size_t cols) {
    return rows * cols > kSparseThreshold || rows > kDenseDimCap || cols > kDenseDimCap;
  }

  static void check_dims(std::size_t rows, std::size_t cols, bool sparse) {
    const std::size_t cap = sparse ? kAmbientCap : kDenseDimCap;
    if (rows > cap || cols > cap)
      throw CapError("matrix dimensions " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " exceed the " +
                     (sparse ? "sparse" : "dense") + " cap");
  }

  void poke(std::size_t r, std::size_t c, u32 v) {
    v %= p_;
    if (!sparse_) {
      dense_[r * cols_ + c] = v;
      return;
    }
    auto& row = rows_sparse_[r];
    const auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(u32(c), u32(0)),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != row.end() && it->first == c) {
      if (v)
        it->second = v;
      else
        row.erase(it);
    } else if (v) {
      row.insert(it, {u32(c), v});
    }
  }

  void compact() {
    if (!sparse_) return;
    for (auto& row : rows_sparse_)
      row.erase(std::remove_if(row.begin(), row.end(),
                               [](const auto& e) { return e.second == 0; }),
                row.end());
  }

  void densify() {
    if (!sparse_) return;
    check_dims(rows_, cols_, false);
    dense_.assign(rows_ * cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (auto [c, v] : rows_sparse_[r]) dense_[r * cols_ + c] = v;
    rows_sparse_.clear();
    sparse_ = false;
  }

  FpMatrix combined(const FpMatrix& o, u32 coef) const {
    if (p_ != o.p_) throw Error("matrix sum: modulus mismatch");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum: shape mismatch");
    std::vector<SparseRow> out(rows_);
    std::vector<u32> scratch(cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::fill(scratch.begin(), scratch.end(), 0);
      for_each_in_row(r, [&](u32 c, u32 v) { scratch[c] = v; });
      o.for_each_in_row(r, [&](u32 c, u32 v) { scratch[c] = (scratch[c] + coef * v) % p_; });
      for (std::size_t c = 0; c < cols_; ++c)
        if (scratch[c]) out[r].emplace_back(u32(c), scratch[c]);
    }
    FpMatrix result = from_sparse_rows(p_, rows_, cols_, std::move(out));
    if (!sparse_ && !o.sparse_) result.densify();
    return result;
  }

  u32 p_;
  std::size_t rows_, cols_;
  bool sparse_;
  std::vector<u32> dense_;
  std::vector<SparseRow> rows_sparse_;
};

// Reduced row-echelon form (same shape, zero rows at the bottom) and rank.
// Pivot columns are the lexicographically smallest possible; the result is
// the unique reduced form of the row space.
inline std::pair<FpMatrix, std::size_t> rref(const FpMatrix& m) {
  RrefAccumulator acc(m.modulus(), m.cols());
  m.accumulate_rows(acc);
  auto rows = acc.reduced_rows();
  const std::size_t rk = rows.size();
  std::vector<std::vector<i64>> padded;
  padded.reserve(m.rows());
  for (auto& r : rows) padded.emplace_back(r.begin(), r.end());
  padded.resize(m.rows(), std::vector<i64>(m.cols(), 0));
  return {FpMatrix::from_rows(m.modulus(), padded), rk};
}

inline std::size_t rank(const FpMatrix& m) {
  RrefAccumulator acc(m.modulus(), m.cols());
  m.accumulate_rows(acc);
  return acc.rank();
}

// Some x with m*x = b, free variables zero; nullopt when b is outside the
// column space.  Deterministic via the reduced augmented system.
inline std::optional<std::vector<u32>> solve(const FpMatrix& m, const std::vector<u32>& b) {
  if (b.size() != m.rows()) throw Error("solve: right-hand side length mismatch");
  const u32 p = m.modulus();
  RrefAccumulator acc(p, m.cols() + 1);
  std::vector<std::pair<u32, u32>> row;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    row.clear();
    m.for_each_in_row(r, [&](u32 c, u32 v) { row.emplace_back(c, v); });
    if (b[r] % p) row.emplace_back(u32(m.cols()), b[r] % p);
    acc.add_sparse_row(row);
  }
  const auto& piv = acc.pivot_columns();
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  auto rows = acc.reduced_rows();
  std::vector<u32> x(m.cols(), 0);
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = rows[k][m.cols()];
  return x;
}

}  // namespace locoh
