#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/gmodule.hpp"
#include "locoh/group.hpp"
#include "locoh/subspace.hpp"

// Towers of subgroups, cochain families living on them, and the finite-scale
// checks that restriction, corestriction, and colimits behave as they should.

namespace locoh {

// L_0 <= L_1 <= ... <= L_m inside one ambient group, with the consecutive
// inclusions and their compositions into the ambient group precomputed.
// Construction invariant: to_top(i) agrees with step(i) followed by
// to_top(i+1), so restriction along the tower is unambiguous.
class SubgroupChain {
 public:
  // Levels are given by generator lists of permutations on the ambient
  // domain.  An empty list denotes the trivial subgroup.  A level that
  // generates the whole ambient group becomes the ambient group itself.
  static SubgroupChain from_generator_sets(
      GroupPtr top, const std::vector<std::vector<Permutation>>& level_gens) {
    if (level_gens.empty())
      throw Error("subgroup chain: at least one level is required");
    SubgroupChain chain;
    chain.ambient_ = top;
    for (std::size_t i = 0; i < level_gens.size(); ++i) {
      auto gens = level_gens[i];
      if (gens.empty()) gens.push_back(Permutation::identity(top->degree()));
      for (const auto& gp : gens)
        if (!top->index_of(gp))
          throw Error("subgroup chain: a generator of level " +
                      std::to_string(i) +
                      " is not an element of the ambient group");
      auto level = share(FiniteGroup::from_generators(gens, top->order()));
      if (level->order() == top->order()) level = top;
      chain.levels_.push_back(std::move(level));
    }
    for (std::size_t i = 0; i + 1 < chain.levels_.size(); ++i) {
      try {
        chain.steps_.push_back(SubgroupEmbedding::from_groups(
            chain.levels_[i], chain.levels_[i + 1]));
      } catch (const Error&) {
        throw Error("subgroup chain: level " + std::to_string(i) +
                    " is not contained in level " + std::to_string(i + 1));
      }
    }
    for (std::size_t i = 0; i < chain.levels_.size(); ++i) {
      try {
        chain.to_top_.push_back(
            same_group(chain.levels_[i], top)
                ? SubgroupEmbedding::identity(top)
                : SubgroupEmbedding::from_groups(chain.levels_[i], top));
      } catch (const Error&) {
        throw Error("subgroup chain: level " + std::to_string(i) +
                    " is not contained in the ambient group");
      }
    }
    for (std::size_t i = 0; i + 1 < chain.levels_.size(); ++i)
      if (chain.steps_[i].then(chain.to_top_[i + 1]).index_map() !=
          chain.to_top_[i].index_map())
        throw Error("subgroup chain: embeddings do not compose consistently");
    return chain;
  }

  std::size_t size() const { return levels_.size(); }
  const GroupPtr& ambient() const { return ambient_; }
  const GroupPtr& level(std::size_t i) const { return levels_.at(i); }
  const SubgroupEmbedding& step(std::size_t i) const { return steps_.at(i); }
  const SubgroupEmbedding& to_top(std::size_t i) const { return to_top_.at(i); }
  bool top_is_full() const { return same_group(levels_.back(), ambient_); }

 private:
  SubgroupChain() = default;

  GroupPtr ambient_;
  std::vector<GroupPtr> levels_;
  std::vector<SubgroupEmbedding> steps_;
  std::vector<SubgroupEmbedding> to_top_;
};

// One cochain per level of a chain, all of the same degree, with coefficients
// restricted from the ambient module.
struct CochainFamily {
  std::size_t degree;
  GModule module;
  std::vector<std::vector<u32>> levels;
};

// Restrict an ambient cochain to every level of the chain.
inline CochainFamily localize(const SubgroupChain& chain, const GModule& v,
                              std::size_t n, const std::vector<u32>& phi) {
  if (!same_group(v.group(), chain.ambient()))
    throw Error("localization: the module lives over a different group than "
                "the chain");
  CochainFamily fam{n, v, {}};
  for (std::size_t i = 0; i < chain.size(); ++i)
    fam.levels.push_back(restrict_cochain(v, chain.to_top(i), n, phi));
  return fam;
}

// Index of the first inclusion L_i <= L_{i+1} along which the family fails
// to restrict correctly, if any.
inline std::optional<std::size_t> first_incompatibility(
    const SubgroupChain& chain, const GModule& v, const CochainFamily& fam) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto upper = restrict_module(v, chain.to_top(i + 1));
    auto expected =
        restrict_cochain(upper, chain.step(i), fam.degree, fam.levels[i + 1]);
    if (expected != fam.levels[i]) return i;
  }
  return std::nullopt;
}

// Reassemble an ambient cochain from a compatible family on a chain whose
// top level is the whole group.  Inverse to localize on the nose.
inline std::vector<u32> splice(const SubgroupChain& chain, const GModule& v,
                               const CochainFamily& fam) {
  if (!same_group(v.group(), chain.ambient()))
    throw Error("splicing: the module lives over a different group than the "
                "chain");
  if (!chain.top_is_full())
    throw Error("splicing: the top level of the chain is not the whole group");
  if (fam.levels.size() != chain.size())
    throw Error("splicing: the family has " +
                std::to_string(fam.levels.size()) + " cochains for " +
                std::to_string(chain.size()) + " levels");
  if (auto bad = first_incompatibility(chain, v, fam))
    throw Error("splicing: the family disagrees across the inclusion of "
                "level " + std::to_string(*bad) + " in level " +
                std::to_string(*bad + 1));
  return fam.levels.back();
}

namespace detail {

// Relations (s - 1)x over the listed group elements, spanning inside the
// free space k[G] (x) tuples (x) V laid out as (h * tuples + t) * dimv + b.
inline RrefAccumulator group_difference_span(const GModule& v,
                                             std::size_t tuples,
                                             const std::vector<u32>& gen_idx) {
  const auto& g = v.group();
  const u32 p = v.modulus();
  const std::size_t dimv = v.dim();
  const std::size_t total = g->order() * tuples * dimv;
  RrefAccumulator acc(p, total);
  std::vector<u32> row(total, 0);
  for (u32 s : gen_idx) {
    const auto at = v.action(s).transpose();
    for (u32 h = 0; h < g->order(); ++h) {
      const u32 sh = g->mult(s, h);
      for (std::size_t t = 0; t < tuples; ++t)
        for (std::size_t b = 0; b < dimv; ++b) {
          std::fill(row.begin(), row.end(), 0);
          at.for_each_in_row(u32(b), [&](u32 r, u32 val) {
            row[(sh * tuples + t) * dimv + r] = val;
          });
          const std::size_t back = (h * tuples + t) * dimv + b;
          row[back] = u32((u64(row[back]) + p - 1) % p);
          acc.add_row(row);
        }
    }
  }
  return acc;
}

inline std::vector<u32> ambient_generator_indices(const GroupPtr& ambient,
                                                  const GroupPtr& level) {
  std::vector<u32> out;
  for (const auto& gp : level->generators()) out.push_back(*ambient->index_of(gp));
  return out;
}

}  // namespace detail

// Two finite-scale colimit facts checked by explicit elimination: the
// coinvariant quotients of the free space surject onto the ambient one at
// every level, with the free-rank dimension count, and the colimit of the
// corestriction system on H_n equals the top term.
inline bool homology_colimit_check(const SubgroupChain& chain, const GModule& v,
                                   std::size_t n) {
  if (!same_group(v.group(), chain.ambient()))
    throw Error("colimit check: the module lives over a different group than "
                "the chain");
  const auto& g = chain.ambient();
  const u32 p = v.modulus();
  BarIndexer bar(g->order(), v.dim());
  const std::size_t tuples = bar.tuple_count(n);
  const std::size_t block = bar.dim(n);
  const std::size_t total = g->order() * block;
  if (total > kDenseDimCap)
    throw CapError("colimit check: the free coinvariant space has dimension " +
                   std::to_string(total) + ", past the dense cap");

  std::vector<std::vector<u32>> unit_rows(total);
  for (std::size_t i = 0; i < total; ++i) {
    unit_rows[i].assign(total, 0);
    unit_rows[i][i] = 1;
  }
  const Subspace full = Subspace::from_vectors(p, total, unit_rows);

  auto top_acc = detail::group_difference_span(
      v, tuples, detail::ambient_generator_indices(g, g));
  const std::size_t top_dim = total - top_acc.rank();
  if (top_dim != block) return false;
  const Subspace top_rel = Subspace::from_accumulator(top_acc);
  const auto top_reps = quotient_representatives(top_rel, full);
  std::vector<std::size_t> top_pivots;
  for (const auto& rep : top_reps) {
    std::size_t piv = 0;
    while (rep[piv] == 0) ++piv;
    top_pivots.push_back(piv);
  }

  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto acc = detail::group_difference_span(
        v, tuples, detail::ambient_generator_indices(g, chain.level(i)));
    const std::size_t level_dim = total - acc.rank();
    const std::size_t index = g->order() / chain.level(i)->order();
    if (level_dim != index * block) return false;
    const auto reps = quotient_representatives(Subspace::from_accumulator(acc), full);
    std::vector<u32> entries(top_dim * reps.size(), 0);
    for (std::size_t j = 0; j < reps.size(); ++j) {
      auto reduced = reps[j];
      top_acc.reduce_row(reduced);
      for (std::size_t r = 0; r < top_dim; ++r)
        entries[r * reps.size() + j] = reduced[top_pivots[r]];
    }
    const auto onto =
        FpMatrix::from_dense(p, top_dim, reps.size(), entries);
    if (rank(onto) != top_dim) return false;
  }

  std::vector<ChainComplex> complexes;
  complexes.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i)
    complexes.emplace_back(restrict_module(v, chain.to_top(i)));
  std::vector<std::size_t> dims;
  for (auto& cx : complexes) dims.push_back(cx.homology(n).dim_H);

  std::size_t sum = 0;
  for (std::size_t d : dims) sum += d;
  RrefAccumulator relations(p, sum);
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto upper = restrict_module(v, chain.to_top(i + 1));
    const auto push = restriction_matrix(upper, chain.step(i), n).transpose();
    const auto& reps = complexes[i].homology(n).cycle_reps;
    for (std::size_t c = 0; c < dims[i]; ++c) {
      const auto coords =
          complexes[i + 1].class_coords(n, push.apply(reps[c]));
      std::vector<u32> row(sum, 0);
      row[offset + c] = 1;
      for (std::size_t r = 0; r < coords.size(); ++r)
        row[offset + dims[i] + r] = u32((u64(p - coords[r]) + p) % p);
      relations.add_row(row);
    }
    offset += dims[i];
  }
  return sum - relations.rank() == dims.back();
}

// Per-level cohomology dimensions and how much of each level's cohomology is
// reached by restriction from the levels above it.
struct SurvivalReport {
  std::size_t degree = 0;
  // dim H^n(L_i, V) per level.
  std::vector<std::size_t> level_dims;
  // image_dims[i][k]: dimension of the image of the composed restriction
  // from level i+1+k down to level i.  Weakly decreasing in k.
  std::vector<std::vector<std::size_t>> image_dims;
  // The image dimension from the top level; the full dimension at the top.
  std::vector<std::size_t> stable_dims;
};

inline SurvivalReport survival_analysis(const SubgroupChain& chain,
                                        const GModule& v, std::size_t n) {
  if (!same_group(v.group(), chain.ambient()))
    throw Error("survival analysis: the module lives over a different group "
                "than the chain");
  SurvivalReport report;
  report.degree = n;
  std::vector<CochainComplex> complexes;
  complexes.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i)
    complexes.emplace_back(restrict_module(v, chain.to_top(i)));
  for (auto& cx : complexes)
    report.level_dims.push_back(cx.cohomology(n).dim_H);

  std::vector<FpMatrix> down;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    down.push_back(
        induced_restriction(complexes[i + 1], complexes[i], chain.step(i), n));

  for (std::size_t i = 0; i < chain.size(); ++i) {
    std::vector<std::size_t> images;
    std::optional<FpMatrix> composed;
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      composed = composed ? *composed * down[j - 1] : down[i];
      images.push_back(rank(*composed));
    }
    report.stable_dims.push_back(images.empty() ? report.level_dims[i]
                                                : images.back());
    report.image_dims.push_back(std::move(images));
  }
  return report;
}

// The standing assumptions behind the survival picture, evaluated on a
// concrete chain: whether the coefficient radical fills the module, the size
// of degree-one cohomology with trivial coefficients, and the per-level
// degree-one dimensions and fixed points.
struct HypothesisReport {
  bool radical_fills = false;
  std::size_t trivial_h1 = 0;
  std::vector<std::size_t> level_h1;
  std::vector<std::size_t> level_fixed;
};

inline HypothesisReport hypothesis_checks(const SubgroupChain& chain,
                                          const GModule& u, const GModule& v) {
  if (!same_group(u.group(), chain.ambient()) ||
      !same_group(v.group(), chain.ambient()))
    throw Error("hypothesis checks: the modules live over a different group "
                "than the chain");
  HypothesisReport report;
  report.radical_fills = coinvariants(u).space().dim() == u.dim();
  CochainComplex trivial_cx(GModule::trivial(chain.ambient(), u.modulus()));
  report.trivial_h1 = trivial_cx.cohomology(1).dim_H;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto restricted = restrict_module(v, chain.to_top(i));
    CochainComplex cx(restricted);
    report.level_h1.push_back(cx.cohomology(1).dim_H);
    report.level_fixed.push_back(fixed_points(restricted).dim());
  }
  return report;
}

}  // namespace locoh
