#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/fp_matrix.hpp"
#include "locoh/gmodule.hpp"
#include "locoh/subspace.hpp"

namespace locoh {

// 0 -> left -> middle -> right -> 0 with explicit structure maps.
struct ShortExactSequence {
  GModule left, middle, right;
  FpMatrix inject;   // dim(middle) x dim(left)
  FpMatrix project;  // dim(right) x dim(middle)
};

// Checks every sequence axiom and reports the first one that fails.
// Equivariance over the generators extends to the whole group.
inline void validate_sequence(const ShortExactSequence& s) {
  const auto fail = [](const std::string& what) {
    throw Error("short exact sequence: " + what);
  };
  if (!same_group(s.left.group(), s.middle.group()) ||
      !same_group(s.middle.group(), s.right.group()))
    fail("modules live over different groups");
  const u32 p = s.middle.modulus();
  if (s.left.modulus() != p || s.right.modulus() != p) fail("modules mix moduli");
  if (s.inject.modulus() != p || s.inject.rows() != s.middle.dim() ||
      s.inject.cols() != s.left.dim())
    fail("injection has the wrong shape");
  if (s.project.modulus() != p || s.project.rows() != s.right.dim() ||
      s.project.cols() != s.middle.dim())
    fail("projection has the wrong shape");
  const auto& g = *s.middle.group();
  for (const auto& gen : g.generators()) {
    const u32 gi = *g.index_of(gen);
    if (s.inject * s.left.action(gi) != s.middle.action(gi) * s.inject)
      fail("injection is not equivariant");
    if (s.project * s.middle.action(gi) != s.right.action(gi) * s.project)
      fail("projection is not equivariant");
  }
  if (rank(s.inject) != s.left.dim()) fail("injection is not injective");
  if (rank(s.project) != s.right.dim()) fail("projection is not surjective");
  if (!(s.project * s.inject).is_zero()) fail("composite of the two maps is nonzero");
  if (s.left.dim() + s.right.dim() != s.middle.dim())
    fail("middle dimension does not match the ends");
}

inline ShortExactSequence split_sequence(const GModule& a, const GModule& c) {
  const u32 p = a.modulus();
  const std::size_t da = a.dim(), dc = c.dim();
  std::vector<FpMatrix::SparseRow> irows(da + dc), qrows(dc);
  for (std::size_t i = 0; i < da; ++i) irows[i].emplace_back(u32(i), 1);
  for (std::size_t i = 0; i < dc; ++i) qrows[i].emplace_back(u32(da + i), 1);
  ShortExactSequence s{a, direct_sum(a, c), c,
                       FpMatrix::from_sparse_rows(p, da + dc, da, std::move(irows)),
                       FpMatrix::from_sparse_rows(p, dc, da + dc, std::move(qrows))};
  validate_sequence(s);
  return s;
}

// Sum-zero vectors inside the permutation module, mapping onto the trivial
// module via the coordinate sum.
inline ShortExactSequence augmentation_sequence(const GroupPtr& g, u32 p) {
  const auto perm = GModule::permutation(g, p);
  const std::size_t n = perm.dim();
  const auto ones = FpMatrix::from_dense(p, 1, n, std::vector<u32>(n, 1));
  Submodule sub(perm, kernel_basis(ones));
  const auto aug = submodule_module(sub);
  const auto inject = sub.space().basis_matrix().transpose();
  ShortExactSequence s{aug, perm, GModule::trivial(g, p), inject, ones};
  validate_sequence(s);
  return s;
}

// Right inverse with free variables pinned to zero, so sections are
// reproducible across runs.
inline FpMatrix right_inverse(const FpMatrix& m) {
  const u32 p = m.modulus();
  std::vector<u32> entries(m.cols() * m.rows(), 0);
  for (std::size_t j = 0; j < m.rows(); ++j) {
    std::vector<u32> e(m.rows(), 0);
    e[j] = 1;
    const auto x = solve(m, e);
    if (!x) throw Error("right inverse requested for a non-surjective map");
    for (std::size_t i = 0; i < m.cols(); ++i) entries[i * m.rows() + j] = (*x)[i];
  }
  return FpMatrix::from_dense(p, m.cols(), m.rows(), std::move(entries));
}

inline FpMatrix left_inverse(const FpMatrix& m) {
  return right_inverse(m.transpose()).transpose();
}

// Apply a module map to every tuple block of a cochain vector.
inline std::vector<u32> apply_blockwise(const FpMatrix& m, const std::vector<u32>& v,
                                        std::size_t blocks) {
  if (v.size() != blocks * m.cols()) throw Error("blockwise apply: size mismatch");
  std::vector<u32> out(blocks * m.rows());
  std::vector<u32> slice(m.cols());
  for (std::size_t t = 0; t < blocks; ++t) {
    std::copy(v.begin() + std::ptrdiff_t(t * m.cols()),
              v.begin() + std::ptrdiff_t((t + 1) * m.cols()), slice.begin());
    const auto r = m.apply(slice);
    std::copy(r.begin(), r.end(), out.begin() + std::ptrdiff_t(t * m.rows()));
  }
  return out;
}

// One junction of the long sequence: the image of the arriving map must
// fill the kernel of the departing map.
struct ExactnessNode {
  std::size_t degree = 0;
  char term = 'A';
  std::size_t dim = 0;
  Subspace arriving = Subspace::zero(2, 0);
  Subspace departing = Subspace::zero(2, 0);
  bool exact = false;
};

struct LongExactSequence {
  std::size_t max_degree = 0;
  std::vector<std::size_t> dims_left, dims_middle, dims_right;
  std::vector<FpMatrix> inject_maps;      // H^n(left) -> H^n(middle), n <= N
  std::vector<FpMatrix> project_maps;     // H^n(middle) -> H^n(right)
  std::vector<FpMatrix> connecting_maps;  // H^n(right) -> H^{n+1}(left)
  std::vector<ExactnessNode> nodes;       // A, B, C per degree

  bool exact() const {
    for (const auto& n : nodes)
      if (!n.exact) return false;
    return true;
  }
};

// Cohomology walk of a short exact sequence through degrees 0..max_degree.
// Connecting classes come from the zig-zag: lift along the fixed section,
// push through the coboundary, pull back through the injection.
inline LongExactSequence long_exact_sequence(const ShortExactSequence& s,
                                             std::size_t max_degree) {
  validate_sequence(s);
  const u32 p = s.middle.modulus();
  CochainComplex ca(s.left), cb(s.middle), cc(s.right);
  const auto section = right_inverse(s.project);
  const auto pullback = left_inverse(s.inject);

  LongExactSequence les;
  les.max_degree = max_degree;
  for (std::size_t n = 0; n <= max_degree; ++n) {
    les.dims_left.push_back(ca.cohomology(n).dim_H);
    les.dims_middle.push_back(cb.cohomology(n).dim_H);
    les.dims_right.push_back(cc.cohomology(n).dim_H);
  }

  const auto tuples = [&](std::size_t n) {
    std::size_t t = 1;
    for (std::size_t k = 0; k < n; ++k) t *= s.middle.group()->order() - 1;
    return t;
  };

  const auto induced = [&](CochainComplex& src, CochainComplex& dst, const FpMatrix& map,
                           std::size_t n) {
    const auto& reps = src.cohomology(n).cocycle_reps;
    const std::size_t rows = dst.cohomology(n).dim_H;
    const std::size_t blocks = tuples(n);
    std::vector<u32> entries(rows * reps.size(), 0);
    for (std::size_t j = 0; j < reps.size(); ++j) {
      const auto image = apply_blockwise(map, reps[j], blocks);
      const auto coords = dst.class_coords(n, image);
      for (std::size_t i = 0; i < rows; ++i) entries[i * reps.size() + j] = coords[i];
    }
    return FpMatrix::from_dense(p, rows, reps.size(), std::move(entries));
  };

  for (std::size_t n = 0; n <= max_degree; ++n) {
    les.inject_maps.push_back(induced(ca, cb, s.inject, n));
    les.project_maps.push_back(induced(cb, cc, s.project, n));

    const auto& creps = cc.cohomology(n).cocycle_reps;
    const std::size_t rows = ca.cohomology(n + 1).dim_H;
    std::vector<u32> entries(rows * creps.size(), 0);
    for (std::size_t j = 0; j < creps.size(); ++j) {
      const auto lift = apply_blockwise(section, creps[j], tuples(n));
      const auto pushed = cb.coboundary(n).apply(lift);
      const std::size_t upper_blocks = tuples(n + 1);
      const auto pulled = apply_blockwise(pullback, pushed, upper_blocks);
      if (apply_blockwise(s.inject, pulled, upper_blocks) != pushed)
        throw Error("connecting class escaped the injected submodule");
      const auto coords = ca.class_coords(n + 1, pulled);
      for (std::size_t i = 0; i < rows; ++i) entries[i * creps.size() + j] = coords[i];
    }
    les.connecting_maps.push_back(
        FpMatrix::from_dense(p, rows, creps.size(), std::move(entries)));
  }

  for (std::size_t n = 0; n <= max_degree; ++n) {
    ExactnessNode a;
    a.degree = n;
    a.term = 'A';
    a.dim = les.dims_left[n];
    a.arriving = n == 0 ? Subspace::zero(p, a.dim) : image_basis(les.connecting_maps[n - 1]);
    a.departing = kernel_basis(les.inject_maps[n]);
    a.exact = a.arriving == a.departing;
    les.nodes.push_back(std::move(a));

    ExactnessNode b;
    b.degree = n;
    b.term = 'B';
    b.dim = les.dims_middle[n];
    b.arriving = image_basis(les.inject_maps[n]);
    b.departing = kernel_basis(les.project_maps[n]);
    b.exact = b.arriving == b.departing;
    les.nodes.push_back(std::move(b));

    ExactnessNode c;
    c.degree = n;
    c.term = 'C';
    c.dim = les.dims_right[n];
    c.arriving = image_basis(les.project_maps[n]);
    c.departing = kernel_basis(les.connecting_maps[n]);
    c.exact = c.arriving == c.departing;
    les.nodes.push_back(std::move(c));
  }
  return les;
}

}  // namespace locoh
