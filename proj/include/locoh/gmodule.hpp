#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locoh/fp_matrix.hpp"
#include "locoh/group.hpp"
#include "locoh/rng.hpp"
#include "locoh/subspace.hpp"

namespace locoh {

// Total stored action entries (|G| * dim^2) allowed per module.
inline constexpr std::size_t kActionEntryCap = 30000000;

inline FpMatrix kron(const FpMatrix& a, const FpMatrix& b) {
  if (a.modulus() != b.modulus()) throw Error("kron: modulus mismatch");
  const u32 p = a.modulus();
  std::vector<FpMatrix::SparseRow> rows(a.rows() * b.rows());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t br = 0; br < b.rows(); ++br) {
      auto& out = rows[ar * b.rows() + br];
      a.for_each_in_row(ar, [&](u32 ac, u32 av) {
        b.for_each_in_row(br, [&](u32 bc, u32 bv) {
          out.emplace_back(u32(ac * b.cols() + bc), av * bv % p);
        });
      });
    }
  return FpMatrix::from_sparse_rows(p, a.rows() * b.rows(), a.cols() * b.cols(),
                                    std::move(rows));
}

// Finite-dimensional representation: one invertible matrix per group element,
// indexed like the group's element table.  Matrices for all elements are
// built once at construction (bar complexes address arbitrary elements), so
// copies share the action store.
class GModule {
 public:
  static GModule trivial(GroupPtr g, u32 p, std::size_t dim = 1) {
    std::vector<FpMatrix> acts(g->order(), FpMatrix::identity(p, dim));
    return GModule(std::move(g), p, std::move(acts), false);
  }

  // Natural domain of the permutations: action(g) e_a = e_{g(a)}.
  static GModule permutation(GroupPtr g, u32 p) {
    const std::size_t d = g->degree();
    std::vector<FpMatrix> acts;
    acts.reserve(g->order());
    for (u32 i = 0; i < g->order(); ++i) {
      const auto& perm = g->element(i);
      std::vector<FpMatrix::SparseRow> rows(d);
      for (u32 a = 0; a < d; ++a) rows[perm(a)].emplace_back(a, 1);
      acts.push_back(FpMatrix::from_sparse_rows(p, d, d, std::move(rows)));
    }
    return GModule(std::move(g), p, std::move(acts), false);
  }

  // Left translation on the group itself: action(g) e_h = e_{gh}.
  static GModule regular(GroupPtr g, u32 p) {
    const std::size_t n = g->order();
    std::vector<FpMatrix> acts;
    acts.reserve(n);
    for (u32 i = 0; i < n; ++i) {
      std::vector<FpMatrix::SparseRow> rows(n);
      for (u32 h = 0; h < n; ++h) rows[g->mult(i, h)].emplace_back(h, 1);
      acts.push_back(FpMatrix::from_sparse_rows(p, n, n, std::move(rows)));
    }
    return GModule(std::move(g), p, std::move(acts), false);
  }

  // One matrix per group generator; every element's matrix is the product
  // along its generator word.  The homomorphism check below is what detects
  // matrices that violate the generators' relations.
  static GModule from_matrices(GroupPtr g, u32 p, const std::vector<FpMatrix>& gen_mats) {
    if (gen_mats.size() != g->generators().size())
      throw Error("from_matrices: need exactly one matrix per generator");
    std::size_t d = gen_mats.empty() ? 1 : gen_mats[0].rows();
    for (const auto& m : gen_mats) {
      if (m.rows() != d || m.cols() != d || m.modulus() != p)
        throw Error("from_matrices: matrices must be square over one field");
      if (rank(m) != d) throw Error("from_matrices: generator matrix is not invertible");
    }
    std::vector<FpMatrix> acts(g->order(), FpMatrix::identity(p, d));
    for (u32 i = 1; i < g->order(); ++i) {
      const u32 gi = g->word(i).back();
      const auto parent = g->index_of(g->element(i) * g->generators()[gi].inverse());
      acts[i] = acts[*parent] * gen_mats[gi];
    }
    return GModule(std::move(g), p, std::move(acts), true);
  }

  const GroupPtr& group() const { return group_; }
  u32 modulus() const { return p_; }
  std::size_t dim() const { return dim_; }
  const FpMatrix& action(u32 element) const { return (*acts_)[element]; }
  std::vector<u32> act(u32 element, const std::vector<u32>& v) const {
    return action(element).apply(v);
  }

  bool operator==(const GModule& o) const {
    if (acts_ == o.acts_) return true;
    return p_ == o.p_ && dim_ == o.dim_ && same_group(group_, o.group_) &&
           *acts_ == *o.acts_;
  }
  bool operator!=(const GModule& o) const { return !(*this == o); }

  // Derived modules (dual, tensor, ...) are homomorphisms by construction;
  // they skip the relation check but not the bookkeeping validation.
  static GModule from_element_matrices(GroupPtr g, u32 p, std::vector<FpMatrix> acts) {
    return GModule(std::move(g), p, std::move(acts), false);
  }

 private:
  GModule(GroupPtr g, u32 p, std::vector<FpMatrix> acts, bool check_relations)
      : group_(std::move(g)), p_(p) {
    check_modulus(p_);
    if (acts.size() != group_->order())
      throw Error("module action table does not cover the group");
    dim_ = acts.empty() ? 0 : acts[0].rows();
    for (const auto& m : acts)
      if (m.rows() != dim_ || m.cols() != dim_ || m.modulus() != p_)
        throw Error("module action matrices must be square over one field");
    if (group_->order() * dim_ * dim_ > kActionEntryCap)
      throw CapError("module action store exceeds entry cap");
    if (!(acts[group_->identity_index()] == FpMatrix::identity(p_, dim_)))
      throw Error("module action at the identity is not the identity matrix");
    if (check_relations) verify_homomorphism(acts);
    acts_ = std::make_shared<const std::vector<FpMatrix>>(std::move(acts));
  }

  void verify_homomorphism(const std::vector<FpMatrix>& acts) const {
    const std::size_t n = group_->order();
    if (n <= 60) {
      for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j)
          if (!(acts[i] * acts[j] == acts[group_->mult(i, j)]))
            throw Error("generator matrices violate a group relation");
      return;
    }
    SeededRng rng(0x6d6f64);  // fixed: the check must not vary run to run
    for (int t = 0; t < 2000; ++t) {
      const u32 i = rng.below(u32(n)), j = rng.below(u32(n));
      if (!(acts[i] * acts[j] == acts[group_->mult(i, j)]))
        throw Error("generator matrices violate a group relation");
    }
  }

  GroupPtr group_;
  u32 p_;
  std::size_t dim_ = 0;
  std::shared_ptr<const std::vector<FpMatrix>> acts_;
};

// Contragredient: (g.f)(v) = f(g^{-1} v), so the pairing with the original
// module is invariant.
inline GModule dual(const GModule& v) {
  std::vector<FpMatrix> acts;
  acts.reserve(v.group()->order());
  for (u32 i = 0; i < v.group()->order(); ++i)
    acts.push_back(v.action(v.group()->inv(i)).transpose());
  return GModule::from_element_matrices(v.group(), v.modulus(), std::move(acts));
}

// Diagonal action; basis (a, b) -> a * dim(y) + b.
inline GModule tensor(const GModule& x, const GModule& y) {
  if (!same_group(x.group(), y.group())) throw Error("tensor: modules over different groups");
  if (x.modulus() != y.modulus()) throw Error("tensor: modulus mismatch");
  std::vector<FpMatrix> acts;
  acts.reserve(x.group()->order());
  for (u32 i = 0; i < x.group()->order(); ++i) acts.push_back(kron(x.action(i), y.action(i)));
  return GModule::from_element_matrices(x.group(), x.modulus(), std::move(acts));
}

// Conjugation action on linear maps x -> y; a map F is flattened row-major,
// (b, a) -> b * dim(x) + a, so the action matrix is Y(g) (x) X(g^{-1})^T.
inline GModule hom(const GModule& x, const GModule& y) {
  if (!same_group(x.group(), y.group())) throw Error("hom: modules over different groups");
  if (x.modulus() != y.modulus()) throw Error("hom: modulus mismatch");
  std::vector<FpMatrix> acts;
  acts.reserve(x.group()->order());
  for (u32 i = 0; i < x.group()->order(); ++i)
    acts.push_back(kron(y.action(i), x.action(x.group()->inv(i)).transpose()));
  return GModule::from_element_matrices(x.group(), x.modulus(), std::move(acts));
}

inline GModule direct_sum(const GModule& a, const GModule& b) {
  if (!same_group(a.group(), b.group()))
    throw Error("direct_sum: modules over different groups");
  if (a.modulus() != b.modulus()) throw Error("direct_sum: modulus mismatch");
  const std::size_t da = a.dim(), db = b.dim();
  std::vector<FpMatrix> acts;
  acts.reserve(a.group()->order());
  for (u32 i = 0; i < a.group()->order(); ++i) {
    std::vector<FpMatrix::SparseRow> rows(da + db);
    for (std::size_t r = 0; r < da; ++r)
      a.action(i).for_each_in_row(r, [&](u32 c, u32 v) { rows[r].emplace_back(c, v); });
    for (std::size_t r = 0; r < db; ++r)
      b.action(i).for_each_in_row(r, [&](u32 c, u32 v) {
        rows[da + r].emplace_back(u32(da + c), v);
      });
    acts.push_back(FpMatrix::from_sparse_rows(a.modulus(), da + db, da + db, std::move(rows)));
  }
  return GModule::from_element_matrices(a.group(), a.modulus(), std::move(acts));
}

// View through a subgroup embedding: the subgroup acts by its image.
inline GModule restrict_module(const GModule& v, const SubgroupEmbedding& e) {
  if (!same_group(v.group(), e.sup()))
    throw Error("restrict: embedding does not target the module's group");
  std::vector<FpMatrix> acts;
  acts.reserve(e.sub()->order());
  for (u32 i = 0; i < e.sub()->order(); ++i) acts.push_back(v.action(e.map(i)));
  return GModule::from_element_matrices(e.sub(), v.modulus(), std::move(acts));
}

// Largest subspace with trivial action; kernels over the generators suffice.
inline Subspace fixed_points(const GModule& v) {
  const auto& gens = v.group()->generators();
  if (gens.empty() || v.dim() == 0) return Subspace::full(v.modulus(), v.dim());
  std::vector<FpMatrix::SparseRow> rows;
  for (const auto& gp : gens) {
    const u32 gi = *v.group()->index_of(gp);
    const auto& m = v.action(gi);
    for (std::size_t r = 0; r < v.dim(); ++r) {
      FpMatrix::SparseRow row;
      m.for_each_in_row(r, [&](u32 c, u32 val) { row.emplace_back(c, val); });
      row.emplace_back(u32(r), v.modulus() - 1);
      rows.push_back(std::move(row));
    }
  }
  const std::size_t nrows = rows.size();
  return kernel_basis(
      FpMatrix::from_sparse_rows(v.modulus(), nrows, v.dim(), std::move(rows)));
}

// G-invariant subspace with its parent module.  Invariance is a construction
// invariant, checked on generators.
class Submodule {
 public:
  Submodule(GModule parent, Subspace space)
      : parent_(std::move(parent)), space_(std::move(space)) {
    if (space_.ambient_dim() != parent_.dim() || space_.modulus() != parent_.modulus())
      throw Error("submodule: subspace does not live in the module");
    for (const auto& gp : parent_.group()->generators()) {
      const u32 gi = *parent_.group()->index_of(gp);
      for (const auto& row : space_.basis_rows())
        if (!space_.contains(parent_.act(gi, row)))
          throw Error("submodule: subspace is not invariant under the action");
    }
  }

  const GModule& parent() const { return parent_; }
  const Subspace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }

 private:
  GModule parent_;
  Subspace space_;
};

// Span of (g - 1)V over generators g.  Any (x - 1)v for x in G is reachable:
// (st - 1)v = (s - 1)(tv) + (t - 1)v, so generator differences of arbitrary
// vectors already generate the whole commutator subspace.
inline Submodule coinvariants(const GModule& v) {
  std::vector<FpMatrix::SparseRow> rows;
  for (const auto& gp : v.group()->generators()) {
    const u32 gi = *v.group()->index_of(gp);
    const auto t = v.action(gi).transpose();
    for (std::size_t c = 0; c < v.dim(); ++c) {
      FpMatrix::SparseRow row;
      t.for_each_in_row(c, [&](u32 r, u32 val) { row.emplace_back(r, val); });
      row.emplace_back(u32(c), v.modulus() - 1);
      rows.push_back(std::move(row));
    }
  }
  const std::size_t nrows = rows.size();
  auto mat = FpMatrix::from_sparse_rows(v.modulus(), nrows, v.dim(), std::move(rows));
  return Submodule(v, row_space(mat));
}

// Smallest invariant subspace containing the given vectors.
inline Submodule spin(const GModule& v, const std::vector<std::vector<u32>>& vectors) {
  RrefAccumulator acc(v.modulus(), v.dim());
  std::vector<u32> gen_indices;
  for (const auto& gp : v.group()->generators())
    gen_indices.push_back(*v.group()->index_of(gp));
  std::vector<std::vector<u32>> queue = vectors;
  while (!queue.empty()) {
    auto vec = std::move(queue.back());
    queue.pop_back();
    if (vec.size() != v.dim()) throw Error("spin: vector length mismatch");
    if (!acc.add_row(vec)) continue;
    for (u32 gi : gen_indices) queue.push_back(v.act(gi, vec));
  }
  return Submodule(v, Subspace::from_accumulator(acc));
}

// Equivariant projection onto W, if W is a direct summand: one linear solve
// in the dim^2 entries of the projection.  Rows constrain commuting with
// generator actions, fixing W pointwise, and mapping into W.
inline std::optional<FpMatrix> find_complement(const Submodule& w) {
  const GModule& v = w.parent();
  const u32 p = v.modulus();
  const std::size_t d = v.dim();
  if (d == 0) return FpMatrix::zero(p, 0, 0);
  std::vector<FpMatrix::SparseRow> rows;
  std::vector<u32> rhs;
  const auto unknown = [d](std::size_t r, std::size_t c) { return u32(r * d + c); };

  std::vector<u32> scratch(d * d);
  for (const auto& gp : v.group()->generators()) {
    const auto& A = v.action(*v.group()->index_of(gp));
    const auto At = A.transpose();
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        std::fill(scratch.begin(), scratch.end(), 0);
        // (pi A - A pi)[r][c] = 0
        A.for_each_in_row(r, [&](u32 k, u32 val) {
          scratch[unknown(k, c)] = (scratch[unknown(k, c)] + p - val) % p;
        });
        At.for_each_in_row(c, [&](u32 k, u32 val) {
          scratch[unknown(r, k)] = (scratch[unknown(r, k)] + val) % p;
        });
        FpMatrix::SparseRow row;
        for (std::size_t i = 0; i < d * d; ++i)
          if (scratch[i]) row.emplace_back(u32(i), scratch[i]);
        rows.push_back(std::move(row));
        rhs.push_back(0);
      }
  }
  for (const auto& wrow : w.space().basis_rows())
    for (std::size_t r = 0; r < d; ++r) {
      FpMatrix::SparseRow row;
      for (std::size_t c = 0; c < d; ++c)
        if (wrow[c]) row.emplace_back(unknown(r, c), wrow[c]);
      rows.push_back(std::move(row));
      rhs.push_back(wrow[r]);
    }
  const auto ann = annihilator(w.space());
  for (const auto& arow : ann.basis_rows())
    for (std::size_t c = 0; c < d; ++c) {
      FpMatrix::SparseRow row;
      for (std::size_t r = 0; r < d; ++r)
        if (arow[r]) row.emplace_back(unknown(r, c), arow[r]);
      rows.push_back(std::move(row));
      rhs.push_back(0);
    }

  const std::size_t nrows = rows.size();
  auto system = FpMatrix::from_sparse_rows(p, nrows, d * d, std::move(rows));
  const auto x = solve(system, rhs);
  if (!x) return std::nullopt;
  FpMatrix pi = FpMatrix::from_dense(p, d, d, *x);
  if (!(pi * pi == pi)) throw Error("projection solve produced a non-idempotent");
  if (!(row_space(pi.transpose()) == row_space(w.space().basis_matrix())))
    throw Error("projection solve missed the target image");
  return pi;
}

// All invariant subspaces, as sums of cyclic ones.  Enumerates one vector
// per projective point, so the bound below is on p^dim.
inline std::vector<Submodule> submodule_lattice(const GModule& v) {
  const u32 p = v.modulus();
  const std::size_t d = v.dim();
  double size = 1;
  for (std::size_t i = 0; i < d; ++i) size *= p;
  if (size > 1000000.0) throw CapError("submodule lattice: p^dim exceeds the enumeration bound");

  std::vector<Subspace> found = {Subspace::zero(p, d)};
  const auto insert_new = [&](const Subspace& s) {
    for (const auto& f : found)
      if (f == s) return false;
    found.push_back(s);
    return true;
  };

  // Cyclic submodules: one spin per vector whose first nonzero entry is 1.
  std::vector<u32> vec(d, 0);
  const std::size_t total = std::size_t(size);
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t c = code;
    bool canonical = true;
    std::size_t first_nonzero = d;
    for (std::size_t i = 0; i < d; ++i) {
      vec[i] = u32(c % p);
      c /= p;
      if (vec[i] && first_nonzero == d) first_nonzero = i;
    }
    canonical = vec[first_nonzero] == 1;
    if (!canonical) continue;
    insert_new(spin(v, {vec}).space());
  }

  // Close under sums.
  for (std::size_t grow = 1; grow;) {
    grow = 0;
    const std::size_t n = found.size();
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        grow += insert_new(sum_subspace(found[i], found[j]));
  }

  std::vector<Submodule> out;
  out.reserve(found.size());
  for (auto& s : found) out.emplace_back(v, std::move(s));
  return out;
}

inline bool is_completely_reducible(const GModule& v) {
  for (const auto& w : submodule_lattice(v))
    if (!find_complement(w)) return false;
  return true;
}

// The action of the parent in the coordinates of the submodule's basis.
// Echelon bases make coordinate extraction a pivot-column read.
inline GModule submodule_module(const Submodule& w) {
  const GModule& v = w.parent();
  const auto& basis = w.space().basis_rows();
  const auto& pivots = w.space().pivot_columns();
  const std::size_t k = basis.size();
  std::vector<FpMatrix> acts;
  acts.reserve(v.group()->order());
  for (u32 g = 0; g < v.group()->order(); ++g) {
    std::vector<FpMatrix::SparseRow> rows(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto img = v.act(g, basis[i]);
      for (std::size_t j = 0; j < k; ++j)
        if (img[pivots[j]]) rows[j].emplace_back(u32(i), img[pivots[j]]);
    }
    acts.push_back(FpMatrix::from_sparse_rows(v.modulus(), k, k, std::move(rows)));
  }
  return GModule::from_element_matrices(v.group(), v.modulus(), std::move(acts));
}

// Action on V/W in the coordinates of W's free columns; residuals after
// reduction by W vanish on W's pivot columns, so free columns carry them.
inline GModule quotient_module(const Submodule& w) {
  const GModule& v = w.parent();
  const u32 p = v.modulus();
  RrefAccumulator acc(p, v.dim());
  for (const auto& r : w.space().basis_rows()) acc.add_row(r);
  const auto free = acc.free_columns();
  const std::size_t k = free.size();
  std::vector<FpMatrix> acts;
  acts.reserve(v.group()->order());
  for (u32 g = 0; g < v.group()->order(); ++g) {
    std::vector<FpMatrix::SparseRow> rows(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<u32> e(v.dim(), 0);
      e[free[i]] = 1;
      auto img = v.act(g, e);
      acc.reduce_row(img);
      for (std::size_t j = 0; j < k; ++j)
        if (img[free[j]]) rows[j].emplace_back(u32(i), img[free[j]]);
    }
    acts.push_back(FpMatrix::from_sparse_rows(p, k, k, std::move(rows)));
  }
  return GModule::from_element_matrices(v.group(), p, std::move(acts));
}

}  // namespace locoh
