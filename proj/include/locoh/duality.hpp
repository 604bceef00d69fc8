#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/fp.hpp"
#include "locoh/fp_matrix.hpp"
#include "locoh/gmodule.hpp"
#include "locoh/subspace.hpp"

// Trace pairing between cochains with values in hom(X, dual(Y)) and chains
// with values in tensor(X, Y), plus certificates that it is a perfect pairing
// between cohomology and homology in each degree.

namespace locoh {

// Raw bilinear form: sum over bar tuples T of tr(f(T) * z(T)), where f(T) is
// read as a dim(Y) x dim(X) matrix and z(T) as a dim(X) x dim(Y) matrix in
// the flattened bases used by hom() and tensor().  No cocycle validation.
inline FpScalar pairing_value(const GModule& x, const GModule& y,
                              const std::vector<u32>& f,
                              const std::vector<u32>& z) {
  if (x.modulus() != y.modulus() || !same_group(x.group(), y.group()))
    throw Error("pairing: modules do not live over the same group algebra");
  const u32 p = x.modulus();
  const std::size_t dx = x.dim();
  const std::size_t dy = y.dim();
  const std::size_t block = dx * dy;
  if (f.size() != z.size())
    throw Error("pairing: cochain and chain have different degrees");
  if (block == 0) return FpScalar(0, p);
  if (f.size() % block != 0)
    throw Error("pairing: vector length is not a multiple of the block size");
  const std::size_t tuples = f.size() / block;
  u64 acc = 0;
  for (std::size_t t = 0; t < tuples; ++t) {
    const std::size_t base = t * block;
    for (std::size_t a = 0; a < dx; ++a)
      for (std::size_t b = 0; b < dy; ++b)
        acc += u64(z[base + a * dy + b]) * u64(f[base + b * dx + a]);
  }
  return FpScalar(i64(acc % p), p);
}

// Validated pairing in degree n.  The cochain must be a cocycle for
// hom(X, dual(Y)) and the chain a cycle for tensor(X, Y); the two failure
// modes are reported separately.
inline FpScalar pair(const GModule& x, const GModule& y, std::size_t n,
                     const std::vector<u32>& f, const std::vector<u32>& z) {
  if (x.modulus() != y.modulus() || !same_group(x.group(), y.group()))
    throw Error("pairing: modules do not live over the same group algebra");
  CochainComplex hc(hom(x, dual(y)));
  ChainComplex tc(tensor(x, y));
  if (f.size() != hc.space_dim(n))
    throw Error("pairing: cochain has the wrong size for degree " +
                std::to_string(n));
  if (z.size() != tc.space_dim(n))
    throw Error("pairing: chain has the wrong size for degree " +
                std::to_string(n));
  auto nonzero = [](const std::vector<u32>& v) {
    for (u32 c : v)
      if (c != 0) return true;
    return false;
  };
  if (nonzero(hc.coboundary(n).apply(f)))
    throw Error("pairing: the cochain is not a cocycle");
  if (n > 0 && nonzero(tc.boundary(n).apply(z)))
    throw Error("pairing: the chain is not a cycle");
  return pairing_value(x, y, f, z);
}

// Evaluation matrix of the pairing on representative bases of H^n and H_n.
// Square and nonsingular whenever the machinery is sound, so violations are
// raised as errors rather than returned.
struct PairingCertificate {
  GModule x;
  GModule y;
  std::size_t degree = 0;
  std::size_t ext_dim = 0;
  std::size_t tor_dim = 0;
  FpMatrix matrix = FpMatrix::zero(2, 0, 0);
};

inline PairingCertificate duality_certificate(const GModule& x,
                                              const GModule& y,
                                              std::size_t n) {
  CochainComplex hc(hom(x, dual(y)));
  ChainComplex tc(tensor(x, y));
  const CohomologyResult& he = hc.cohomology(n);
  const HomologyResult& ht = tc.homology(n);
  PairingCertificate cert{x, y, n, he.dim_H, ht.dim_H,
                          FpMatrix::zero(x.modulus(), he.dim_H, ht.dim_H)};
  if (he.dim_H != ht.dim_H)
    throw Error("duality certificate: cohomology rank " +
                std::to_string(he.dim_H) + " and homology rank " +
                std::to_string(ht.dim_H) + " differ in degree " +
                std::to_string(n) + "; the complex machinery is defective");
  std::vector<u32> entries(he.dim_H * ht.dim_H, 0);
  for (std::size_t i = 0; i < he.dim_H; ++i)
    for (std::size_t j = 0; j < ht.dim_H; ++j)
      entries[i * ht.dim_H + j] =
          pairing_value(x, y, he.cocycle_reps[i], ht.cycle_reps[j]).value();
  cert.matrix =
      FpMatrix::from_dense(x.modulus(), he.dim_H, ht.dim_H, entries);
  if (rank(cert.matrix) != he.dim_H)
    throw Error("duality certificate: the pairing matrix is singular in "
                "degree " + std::to_string(n) +
                "; the representative bases are defective");
  return cert;
}

// One annihilator identity relating a square matrix and its transpose.
// When the identity fails, the two sides are kept for inspection.
struct AnnihilatorIdentity {
  std::string name;
  bool holds = false;
  Subspace lhs = Subspace::zero(2, 0);
  Subspace rhs = Subspace::zero(2, 0);
};

// The four kernel/image annihilator identities for f against its transpose:
//   ann(im f) = ker f^T     ann(ker f) = im f^T
//   im f = ann(ker f^T)     ker f = ann(im f^T)
inline std::vector<AnnihilatorIdentity> transpose_annihilator_check(
    const FpMatrix& f) {
  if (f.rows() != f.cols())
    throw Error("annihilator check: the matrix is not square");
  const FpMatrix ft = f.transpose();
  const Subspace im_f = image_basis(f);
  const Subspace ker_f = kernel_basis(f);
  const Subspace im_ft = image_basis(ft);
  const Subspace ker_ft = kernel_basis(ft);
  std::vector<AnnihilatorIdentity> out;
  auto add = [&out](const char* name, Subspace lhs, Subspace rhs) {
    AnnihilatorIdentity id;
    id.name = name;
    id.lhs = std::move(lhs);
    id.rhs = std::move(rhs);
    id.holds = id.lhs == id.rhs;
    out.push_back(std::move(id));
  };
  add("ann(im f) = ker f^T", annihilator(im_f), ker_ft);
  add("ann(ker f) = im f^T", annihilator(ker_f), im_ft);
  add("im f = ann(ker f^T)", im_f, annihilator(ker_ft));
  add("ker f = ann(im f^T)", ker_f, annihilator(im_ft));
  return out;
}

inline bool all_identities_hold(const std::vector<AnnihilatorIdentity>& ids) {
  for (const auto& id : ids)
    if (!id.holds) return false;
  return true;
}

// Under the evaluation pairing between V and dual(V), the functionals that
// kill the augmentation submodule of dual(V) are exactly the fixed points.
inline bool dual_coinvariants_check(const GModule& v) {
  return annihilator(coinvariants(dual(v)).space()) == fixed_points(v);
}

}  // namespace locoh
