#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locoh/eliminator.hpp"
#include "locoh/fp_matrix.hpp"
#include "locoh/gmodule.hpp"
#include "locoh/group.hpp"
#include "locoh/subspace.hpp"

namespace locoh {

inline constexpr std::size_t kDefaultMaxDegree = 3;
// Entries a materialized differential may hold.
inline constexpr std::size_t kDifferentialEntryCap = 30000000;
// Elimination budget: rows * width * min(rows, width), with a 64x credit
// for the bit-packed GF(2) backend.
inline constexpr double kEliminationWorkCap = 1e13;
// Entries a materialized kernel basis may hold; kernels of very wide maps
// with few rows are near-square in both directions.
inline constexpr std::size_t kKernelEntryCap = 100000000;

// Index arithmetic for normalized bar tuples: degree-n basis vectors are
// (tuple of n non-identity elements, module coordinate).  A tuple's digits
// are element indices minus one, first entry most significant, and the
// flattened index is tuple * dimv + coordinate.
class BarIndexer {
 public:
  BarIndexer(std::size_t group_order, std::size_t dimv)
      : m_(group_order - 1), dimv_(dimv) {}

  std::size_t nonidentity() const { return m_; }
  std::size_t dimv() const { return dimv_; }

  std::size_t tuple_count(std::size_t n) const {
    std::size_t t = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (m_ != 0 && t > kAmbientCap / m_)
        throw CapError("bar tuple count at degree " + std::to_string(n) +
                       " exceeds the ambient cap");
      t *= m_;
    }
    return t;
  }

  std::size_t dim(std::size_t n) const {
    const std::size_t t = tuple_count(n);
    if (dimv_ != 0 && t > kAmbientCap / dimv_)
      throw CapError("bar space dimension at degree " + std::to_string(n) +
                     " exceeds the ambient cap");
    return t * dimv_;
  }

  // Digits of tuple index t at degree n, most significant first.
  std::vector<u32> digits(std::size_t t, std::size_t n) const {
    std::vector<u32> d(n);
    for (std::size_t k = n; k-- > 0;) {
      d[k] = u32(t % m_);
      t /= m_;
    }
    return d;
  }

  std::size_t index_of_digits(const std::vector<u32>& d) const {
    std::size_t t = 0;
    for (u32 x : d) t = t * m_ + x;
    return t;
  }

  bool advance(std::vector<u32>& d) const {
    for (std::size_t k = d.size(); k-- > 0;) {
      if (++d[k] < m_) return true;
      d[k] = 0;
    }
    return false;
  }

 private:
  std::size_t m_, dimv_;
};

struct CohomologyResult {
  std::size_t degree = 0;
  std::size_t dim_H = 0, dim_Z = 0, dim_B = 0;
  std::vector<std::vector<u32>> cocycle_reps;
  Subspace coboundary_basis = Subspace::zero(2, 0);
};

struct HomologyResult {
  std::size_t degree = 0;
  std::size_t dim_H = 0, dim_Z = 0, dim_B = 0;
  std::vector<std::vector<u32>> cycle_reps;
  Subspace boundary_basis = Subspace::zero(2, 0);
};

namespace detail {

inline void check_elimination_work(std::size_t rows, std::size_t width, u32 p,
                                   const std::string& what) {
  double work = double(rows) * double(width) * double(std::min(rows, width));
  if (p == 2) work /= 64.0;
  if (work > kEliminationWorkCap)
    throw CapError(what + ": elimination work for a " + std::to_string(rows) + " x " +
                   std::to_string(width) + " system exceeds the budget");
}

inline void check_entry_estimate(std::size_t rows, std::size_t per_row,
                                 const std::string& what) {
  if (per_row != 0 && rows > kDifferentialEntryCap / per_row)
    throw CapError(what + ": materializing " + std::to_string(rows) +
                   " rows would exceed the entry cap");
}

inline u32 sign_of(std::size_t i, u32 p) { return i % 2 ? p - 1 : 1; }

inline void check_kernel_size(std::size_t width, std::size_t rank, const std::string& what) {
  const std::size_t kdim = width - rank;
  if (kdim != 0 && width > kKernelEntryCap / kdim)
    throw CapError(what + ": a kernel basis of " + std::to_string(kdim) + " vectors of length " +
                   std::to_string(width) + " exceeds the entry cap");
}

// Longest action-matrix row of the module, for materialization estimates.
inline std::size_t max_action_row_nnz(const GModule& v) {
  std::size_t best = 0;
  for (u32 g = 0; g < v.group()->order(); ++g)
    for (std::size_t r = 0; r < v.dim(); ++r) {
      std::size_t count = 0;
      v.action(g).for_each_in_row(r, [&](u32, u32) { ++count; });
      best = std::max(best, count);
    }
  return best;
}

}  // namespace detail

// Cochain side of the normalized bar complex of one module.  Differentials
// and eliminations are materialized on demand and cached; every observer is
// deterministic, so repeated queries are cheap and stable.
class CochainComplex {
 public:
  explicit CochainComplex(GModule v) : v_(std::move(v)), ix_(v_.group()->order(), v_.dim()) {}

  const GModule& module() const { return v_; }
  const GroupPtr& group() const { return v_.group(); }
  u32 modulus() const { return v_.modulus(); }
  std::size_t space_dim(std::size_t n) const { return ix_.dim(n); }

  // delta^n : C^n -> C^{n+1}; (delta phi)(g1..g_{n+1}) = g1 phi(g2..) +
  // sum_i (-1)^i phi(.. g_i g_{i+1} ..) + (-1)^{n+1} phi(g1..g_n), with
  // merged-identity terms dropped.
  const FpMatrix& coboundary(std::size_t n) {
    auto it = delta_.find(n);
    if (it != delta_.end()) return it->second;

    const u32 p = modulus();
    const std::size_t dimv = v_.dim();
    const std::size_t src_dim = ix_.dim(n);
    const std::size_t dst_tuples = ix_.tuple_count(n + 1);
    const std::size_t dst_dim = ix_.dim(n + 1);
    if (!action_nnz_) action_nnz_ = detail::max_action_row_nnz(v_);
    detail::check_entry_estimate(dst_dim, *action_nnz_ + n + 2,
                                 "coboundary degree " + std::to_string(n));

    std::vector<FpMatrix::SparseRow> rows(dst_dim);
    std::vector<u32> d(n + 1, 0);
    std::vector<u32> scratch_digits;
    for (std::size_t t = 0; t < dst_tuples; ++t, ix_.advance(d)) {
      const u32 g1 = d[0] + 1;
      const std::size_t tail = n == 0 ? 0 : t % ix_.tuple_count(n);
      const std::size_t prefix = t / ix_.nonidentity();
      const auto& act = v_.action(g1);
      for (std::size_t b2 = 0; b2 < dimv; ++b2) {
        auto& row = rows[t * dimv + b2];
        act.for_each_in_row(b2, [&](u32 b, u32 val) {
          row.emplace_back(u32(tail * dimv + b), val);
        });
        row.emplace_back(u32(prefix * dimv + b2), detail::sign_of(n + 1, p));
      }
      for (std::size_t i = 1; i <= n; ++i) {
        const u32 e = v_.group()->mult(d[i - 1] + 1, d[i] + 1);
        if (e == 0) continue;
        scratch_digits.assign(d.begin(), d.end());
        scratch_digits[i - 1] = e - 1;
        scratch_digits.erase(scratch_digits.begin() + std::ptrdiff_t(i));
        const std::size_t merged = ix_.index_of_digits(scratch_digits);
        const u32 s = detail::sign_of(i, p);
        for (std::size_t b2 = 0; b2 < dimv; ++b2)
          rows[t * dimv + b2].emplace_back(u32(merged * dimv + b2), s);
      }
    }
    auto mat = FpMatrix::from_sparse_rows(p, dst_dim, src_dim, std::move(rows));
    return delta_.emplace(n, std::move(mat)).first->second;
  }

  // Kernel of delta^n, canonical basis.
  const Subspace& cocycle_space(std::size_t n) {
    forward(n);
    return cocycles_.at(n);
  }

  // Image of delta^{n-1} inside C^n.
  const Subspace& coboundary_space(std::size_t n) {
    image_acc(n);
    return boundaries_.at(n);
  }

  const CohomologyResult& cohomology(std::size_t n) {
    auto it = results_.find(n);
    if (it != results_.end()) return it->second;
    const auto& z = cocycle_space(n);
    const auto& b = coboundary_space(n);
    CohomologyResult r;
    r.degree = n;
    r.dim_Z = z.dim();
    r.dim_B = b.dim();
    if (r.dim_B > r.dim_Z)
      throw Error("coboundaries escape the cocycles; the complex is corrupt");
    r.dim_H = r.dim_Z - r.dim_B;
    r.cocycle_reps = quotient_representatives(b, z);
    r.coboundary_basis = b;
    return results_.emplace(n, std::move(r)).first->second;
  }

  // delta^{n+1} after delta^n is the zero matrix; checked exactly.
  bool composite_is_zero(std::size_t n) {
    return (coboundary(n + 1) * coboundary(n)).is_zero();
  }

  // Coordinates of a cocycle's class in the representative basis of H^n.
  // The residual modulo coboundaries of any cocycle is supported on the
  // representatives, whose pivot entries read the coefficients off directly.
  std::vector<u32> class_coords(std::size_t n, const std::vector<u32>& cocycle) {
    const auto& res = cohomology(n);
    if (!cocycle_space(n).contains(cocycle))
      throw Error("class coordinates requested for a non-cocycle");
    std::vector<u32> r = cocycle;
    image_acc(n)->reduce_row(r);
    std::vector<u32> coords;
    coords.reserve(res.dim_H);
    for (const auto& rep : res.cocycle_reps) {
      std::size_t piv = 0;
      while (rep[piv] == 0) ++piv;
      coords.push_back(r[piv]);
    }
    return coords;
  }

 private:
  // Forward elimination of delta^n rows: rank and kernel.
  void forward(std::size_t n) {
    if (cocycles_.count(n)) return;
    const std::size_t width = ix_.dim(n), rows = ix_.dim(n + 1);
    detail::check_elimination_work(rows, width, modulus(),
                                   "cocycles at degree " + std::to_string(n));
    const auto& d = coboundary(n);
    RrefAccumulator acc(modulus(), width);
    d.accumulate_rows(acc);
    detail::check_kernel_size(width, acc.rank(), "cocycles at degree " + std::to_string(n));
    cocycles_.emplace(n, Subspace::from_vectors(modulus(), width, acc.kernel_generators()));
  }

  RrefAccumulator* image_acc(std::size_t n) {
    auto it = image_accs_.find(n);
    if (it != image_accs_.end()) return &it->second;
    const std::size_t width = ix_.dim(n);
    RrefAccumulator acc(modulus(), width);
    if (n > 0) {
      const std::size_t rows = ix_.dim(n - 1);
      detail::check_elimination_work(rows, width, modulus(),
                                     "coboundaries at degree " + std::to_string(n));
      const auto t = coboundary(n - 1).transpose();
      t.accumulate_rows(acc);
    }
    auto* stored = &image_accs_.emplace(n, std::move(acc)).first->second;
    boundaries_.emplace(n, Subspace::from_accumulator(*stored));
    return stored;
  }

  GModule v_;
  BarIndexer ix_;
  std::optional<std::size_t> action_nnz_;
  std::map<std::size_t, FpMatrix> delta_;
  std::map<std::size_t, Subspace> cocycles_;
  std::map<std::size_t, Subspace> boundaries_;
  std::map<std::size_t, RrefAccumulator> image_accs_;
  std::map<std::size_t, CohomologyResult> results_;
};

// Chain side: same basis indexing, boundary adjoint to the coboundary under
// the degreewise pairing, so homology and cohomology line up for pairing.
class ChainComplex {
 public:
  explicit ChainComplex(GModule v) : v_(std::move(v)), ix_(v_.group()->order(), v_.dim()) {}

  const GModule& module() const { return v_; }
  const GroupPtr& group() const { return v_.group(); }
  u32 modulus() const { return v_.modulus(); }
  std::size_t space_dim(std::size_t n) const { return ix_.dim(n); }

  // boundary_n : C_n -> C_{n-1}; on [g1|..|gn] (x) w it is
  // [g2|..|gn] (x) g1^{-1} w + sum_i (-1)^i [.. g_i g_{i+1} ..] (x) w
  // + (-1)^n [g1|..|g_{n-1}] (x) w, merged identities dropped.
  const FpMatrix& boundary(std::size_t n) {
    auto it = del_.find(n);
    if (it != del_.end()) return it->second;

    const u32 p = modulus();
    const std::size_t dimv = v_.dim();
    if (n == 0) {
      auto zero = FpMatrix::zero(p, 0, dimv);
      return del_.emplace(0, std::move(zero)).first->second;
    }
    const std::size_t src_tuples = ix_.tuple_count(n);
    const std::size_t src_dim = ix_.dim(n);
    const std::size_t dst_dim = ix_.dim(n - 1);
    if (!action_nnz_) action_nnz_ = detail::max_action_row_nnz(v_);
    detail::check_entry_estimate(src_dim, *action_nnz_ + n + 1,
                                 "boundary degree " + std::to_string(n));

    std::vector<FpMatrix::SparseRow> rows(dst_dim);
    std::vector<u32> d(n, 0);
    std::vector<u32> scratch_digits;
    for (std::size_t t = 0; t < src_tuples; ++t, ix_.advance(d)) {
      const u32 g1 = d[0] + 1;
      const std::size_t tail = n == 1 ? 0 : t % ix_.tuple_count(n - 1);
      const std::size_t prefix = t / ix_.nonidentity();
      const auto& tr = inv_transpose(g1);
      const u32 last_sign = detail::sign_of(n, p);
      for (std::size_t b = 0; b < dimv; ++b) {
        const u32 col = u32(t * dimv + b);
        tr.for_each_in_row(b, [&](u32 b2, u32 val) {
          rows[tail * dimv + b2].emplace_back(col, val);
        });
        rows[prefix * dimv + b].emplace_back(col, last_sign);
      }
      for (std::size_t i = 1; i < n; ++i) {
        const u32 e = v_.group()->mult(d[i - 1] + 1, d[i] + 1);
        if (e == 0) continue;
        scratch_digits.assign(d.begin(), d.end());
        scratch_digits[i - 1] = e - 1;
        scratch_digits.erase(scratch_digits.begin() + std::ptrdiff_t(i));
        const std::size_t merged = ix_.index_of_digits(scratch_digits);
        const u32 s = detail::sign_of(i, p);
        for (std::size_t b = 0; b < dimv; ++b)
          rows[merged * dimv + b].emplace_back(u32(t * dimv + b), s);
      }
    }
    auto mat = FpMatrix::from_sparse_rows(p, dst_dim, src_dim, std::move(rows));
    return del_.emplace(n, std::move(mat)).first->second;
  }

  // Kernel of boundary_n.
  const Subspace& cycle_space(std::size_t n) {
    if (!cycles_.count(n)) {
      const std::size_t width = ix_.dim(n);
      const std::size_t rows = n == 0 ? 0 : ix_.dim(n - 1);
      detail::check_elimination_work(rows, width, modulus(),
                                     "cycles at degree " + std::to_string(n));
      const auto& d = boundary(n);
      RrefAccumulator acc(modulus(), width);
      d.accumulate_rows(acc);
      detail::check_kernel_size(width, acc.rank(), "cycles at degree " + std::to_string(n));
      cycles_.emplace(n, Subspace::from_vectors(modulus(), width, acc.kernel_generators()));
    }
    return cycles_.at(n);
  }

  // Image of boundary_{n+1} inside C_n.
  const Subspace& boundary_space(std::size_t n) {
    image_acc(n);
    return boundaries_.at(n);
  }

  const HomologyResult& homology(std::size_t n) {
    auto it = results_.find(n);
    if (it != results_.end()) return it->second;
    const auto& z = cycle_space(n);
    const auto& b = boundary_space(n);
    HomologyResult r;
    r.degree = n;
    r.dim_Z = z.dim();
    r.dim_B = b.dim();
    if (r.dim_B > r.dim_Z)
      throw Error("boundaries escape the cycles; the complex is corrupt");
    r.dim_H = r.dim_Z - r.dim_B;
    r.cycle_reps = quotient_representatives(b, z);
    r.boundary_basis = b;
    return results_.emplace(n, std::move(r)).first->second;
  }

  bool composite_is_zero(std::size_t n) {
    return (boundary(n) * boundary(n + 1)).is_zero();
  }

  std::vector<u32> class_coords(std::size_t n, const std::vector<u32>& cycle) {
    const auto& res = homology(n);
    if (!cycle_space(n).contains(cycle))
      throw Error("class coordinates requested for a non-cycle");
    std::vector<u32> r = cycle;
    image_acc(n)->reduce_row(r);
    std::vector<u32> coords;
    coords.reserve(res.dim_H);
    for (const auto& rep : res.cycle_reps) {
      std::size_t piv = 0;
      while (rep[piv] == 0) ++piv;
      coords.push_back(r[piv]);
    }
    return coords;
  }

 private:
  const FpMatrix& inv_transpose(u32 g) {
    auto it = invt_.find(g);
    if (it != invt_.end()) return it->second;
    auto m = v_.action(v_.group()->inv(g)).transpose();
    return invt_.emplace(g, std::move(m)).first->second;
  }

  RrefAccumulator* image_acc(std::size_t n) {
    auto it = image_accs_.find(n);
    if (it != image_accs_.end()) return &it->second;
    const std::size_t width = ix_.dim(n);
    const std::size_t rows = ix_.dim(n + 1);
    detail::check_elimination_work(rows, width, modulus(),
                                   "boundaries at degree " + std::to_string(n));
    const auto t = boundary(n + 1).transpose();
    RrefAccumulator acc(modulus(), width);
    t.accumulate_rows(acc);
    auto* stored = &image_accs_.emplace(n, std::move(acc)).first->second;
    boundaries_.emplace(n, Subspace::from_accumulator(*stored));
    return stored;
  }

  GModule v_;
  BarIndexer ix_;
  std::optional<std::size_t> action_nnz_;
  std::map<u32, FpMatrix> invt_;
  std::map<std::size_t, FpMatrix> del_;
  std::map<std::size_t, Subspace> cycles_;
  std::map<std::size_t, Subspace> boundaries_;
  std::map<std::size_t, RrefAccumulator> image_accs_;
  std::map<std::size_t, HomologyResult> results_;
};

inline CohomologyResult ext(const GModule& x, const GModule& y, std::size_t n) {
  CochainComplex cx(hom(x, y));
  return cx.cohomology(n);
}

inline HomologyResult tor(const GModule& x, const GModule& y, std::size_t n) {
  ChainComplex cx(tensor(x, y));
  return cx.homology(n);
}

// phi |-> phi restricted: evaluate on tuples of subgroup elements pushed
// through the embedding.  Identity maps to identity, so normalized tuples
// stay normalized.
inline std::vector<u32> restrict_cochain(const GModule& v, const SubgroupEmbedding& e,
                                         std::size_t n, const std::vector<u32>& phi) {
  if (!same_group(v.group(), e.sup()))
    throw Error("cochain restriction: embedding does not target the module's group");
  BarIndexer gx(e.sup()->order(), v.dim());
  BarIndexer lx(e.sub()->order(), v.dim());
  if (phi.size() != gx.dim(n)) throw Error("cochain restriction: degree mismatch");
  std::vector<u32> out(lx.dim(n));
  const std::size_t ltuples = lx.tuple_count(n);
  std::vector<u32> d(n, 0);
  for (std::size_t t = 0; t < ltuples; ++t, lx.advance(d)) {
    std::vector<u32> gd(n);
    for (std::size_t k = 0; k < n; ++k) gd[k] = e.map(d[k] + 1) - 1;
    const std::size_t gt = gx.index_of_digits(gd);
    for (std::size_t b = 0; b < v.dim(); ++b) out[t * v.dim() + b] = phi[gt * v.dim() + b];
  }
  return out;
}

// Matrix of the map above, for naturality checks and induced maps.
inline FpMatrix restriction_matrix(const GModule& v, const SubgroupEmbedding& e,
                                   std::size_t n) {
  BarIndexer gx(e.sup()->order(), v.dim());
  BarIndexer lx(e.sub()->order(), v.dim());
  const std::size_t rows = lx.dim(n), cols = gx.dim(n);
  std::vector<FpMatrix::SparseRow> data(rows);
  const std::size_t ltuples = lx.tuple_count(n);
  std::vector<u32> d(n, 0);
  for (std::size_t t = 0; t < ltuples; ++t, lx.advance(d)) {
    std::vector<u32> gd(n);
    for (std::size_t k = 0; k < n; ++k) gd[k] = e.map(d[k] + 1) - 1;
    const std::size_t gt = gx.index_of_digits(gd);
    for (std::size_t b = 0; b < v.dim(); ++b)
      data[t * v.dim() + b].emplace_back(u32(gt * v.dim() + b), 1);
  }
  return FpMatrix::from_sparse_rows(v.modulus(), rows, cols, std::move(data));
}

// H^n(G, V) -> H^n(L, V|L) in representative coordinates: restrict each
// representative cocycle and read its class downstairs.
inline FpMatrix induced_restriction(CochainComplex& up, CochainComplex& down,
                                    const SubgroupEmbedding& e, std::size_t n) {
  if (!(down.module() == restrict_module(up.module(), e)))
    throw Error("induced restriction: lower complex is not the restricted module");
  const auto& src = up.cohomology(n);
  const std::size_t rows = down.cohomology(n).dim_H;
  std::vector<u32> entries(rows * src.dim_H, 0);
  for (std::size_t j = 0; j < src.cocycle_reps.size(); ++j) {
    const auto r = restrict_cochain(up.module(), e, n, src.cocycle_reps[j]);
    const auto c = down.class_coords(n, r);
    for (std::size_t i = 0; i < rows; ++i) entries[i * src.dim_H + j] = c[i];
  }
  return FpMatrix::from_dense(up.modulus(), rows, src.dim_H, std::move(entries));
}

}  // namespace locoh
