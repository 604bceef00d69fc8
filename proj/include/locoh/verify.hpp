#pragma once

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/duality.hpp"
#include "locoh/les.hpp"
#include "locoh/local_system.hpp"
#include "locoh/rng.hpp"

// Seeded property suites behind the `verify` subcommand.  Each suite counts
// its checks and stops at the first violation, reporting a witness.  The
// LOCOH_VERIFY_MUTATE environment variable names a suite whose data gets
// deliberately perturbed at one point, simulating a broken build so the
// failure path itself stays exercised.

namespace locoh {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  bool ok = true;
  std::string witness;
};

namespace detail {

inline bool mutation_active(const char* suite) {
  const char* env = std::getenv("LOCOH_VERIFY_MUTATE");
  return env && suite == std::string(env);
}

// Perturb one coordinate when the mutation hook targets this suite.
inline std::vector<u32> mutate_vector(const char* suite, std::vector<u32> v,
                                      u32 p) {
  if (mutation_active(suite) && !v.empty()) v[0] = (v[0] + 1) % p;
  return v;
}

inline std::size_t mutate_scalar(const char* suite, std::size_t v) {
  return mutation_active(suite) ? v + 1 : v;
}

inline std::vector<u32> random_vector(SeededRng& rng, u32 p, std::size_t n) {
  std::vector<u32> v(n);
  for (auto& c : v) c = rng.fp_value(p);
  return v;
}

inline bool is_zero_vector(const std::vector<u32>& v) {
  for (u32 c : v)
    if (c != 0) return false;
  return true;
}

}  // namespace detail

// The four transpose annihilator identities plus rank accounting on seeded
// random endomorphisms: p in {2, 3, 5}, dimensions 1 through 8, 100 each.
inline SuiteResult verify_annihilators(u64 seed) {
  SuiteResult res{"annihilators", 0, true, ""};
  SeededRng rng(seed ^ 0xa11);
  for (u32 p : {2u, 3u, 5u}) {
    for (std::size_t dim = 1; dim <= 8 && res.ok; ++dim)
      for (int trial = 0; trial < 100 && res.ok; ++trial) {
        std::vector<u32> entries(dim * dim);
        for (auto& e : entries) e = rng.fp_value(p);
        auto f = FpMatrix::from_dense(p, dim, dim, entries);
        auto ids = transpose_annihilator_check(f);
        for (const auto& id : ids) {
          ++res.checks;
          if (!id.holds) {
            res.ok = false;
            std::ostringstream w;
            w << "identity \"" << id.name << "\" fails for p = " << p
              << ", dim = " << dim << ", trial " << trial << " (lhs dim "
              << id.lhs.dim() << ", rhs dim " << id.rhs.dim() << ")";
            res.witness = w.str();
            break;
          }
        }
        const std::size_t r = detail::mutate_scalar("annihilators", rank(f));
        ++res.checks;
        if (res.ok && r + kernel_basis(f).dim() != dim) {
          res.ok = false;
          std::ostringstream w;
          w << "rank " << r << " + nullity " << kernel_basis(f).dim()
            << " != " << dim << " for p = " << p << ", trial " << trial;
          res.witness = w.str();
        }
      }
  }
  return res;
}

// Adjointness of the differentials under the trace pairing on random data,
// and nonsingular certificates on a small group/module grid.
inline SuiteResult verify_duality(u64 seed) {
  SuiteResult res{"duality", 0, true, ""};
  SeededRng rng(seed ^ 0xd0a1);
  struct Inst {
    const char* kind;
    std::size_t size;
    u32 p;
  };
  for (const Inst& inst :
       {Inst{"cyclic", 2, 2}, Inst{"cyclic", 3, 3}, Inst{"symmetric", 3, 2}}) {
    auto g = named_group(inst.kind, inst.size);
    auto x = GModule::permutation(g, inst.p);
    auto y = GModule::trivial(g, inst.p);
    CochainComplex hc(hom(x, dual(y)));
    ChainComplex tc(tensor(x, y));
    for (std::size_t n = 0; n <= 1 && res.ok; ++n)
      for (int trial = 0; trial < 20 && res.ok; ++trial) {
        auto f = detail::random_vector(rng, inst.p, hc.space_dim(n));
        auto z = detail::random_vector(rng, inst.p, tc.space_dim(n + 1));
        auto lhs = pairing_value(
            x, y,
            detail::mutate_vector("duality", hc.coboundary(n).apply(f), inst.p),
            z);
        auto rhs = pairing_value(x, y, f, tc.boundary(n + 1).apply(z));
        ++res.checks;
        if (lhs.value() != rhs.value()) {
          res.ok = false;
          std::ostringstream w;
          w << "adjointness fails over " << inst.kind << "(" << inst.size
            << "), p = " << inst.p << ", degree " << n << ", trial " << trial
            << ": " << lhs.value() << " != " << rhs.value();
          res.witness = w.str();
        }
      }
    for (std::size_t n = 0; n <= 2 && res.ok; ++n) {
      ++res.checks;
      try {
        duality_certificate(x, y, n);
      } catch (const Error& e) {
        res.ok = false;
        res.witness = e.what();
      }
    }
  }
  return res;
}

// Composite differentials vanish on random cochains and chains, and degree
// zero matches fixed points and coinvariants.
inline SuiteResult verify_complexes(u64 seed) {
  SuiteResult res{"complexes", 0, true, ""};
  SeededRng rng(seed ^ 0xc0);
  struct Inst {
    const char* kind;
    std::size_t size;
    u32 p;
  };
  for (const Inst& inst : {Inst{"cyclic", 4, 2}, Inst{"symmetric", 3, 2},
                           Inst{"symmetric", 3, 3}, Inst{"dihedral", 4, 2}}) {
    auto g = named_group(inst.kind, inst.size);
    for (const auto& v :
         {GModule::permutation(g, inst.p), GModule::trivial(g, inst.p)}) {
      CochainComplex cx(v);
      ChainComplex ch(v);
      for (std::size_t n = 0; n <= 1 && res.ok; ++n)
        for (int trial = 0; trial < 10 && res.ok; ++trial) {
          auto phi = detail::random_vector(rng, inst.p, cx.space_dim(n));
          auto twice = detail::mutate_vector(
              "complexes",
              cx.coboundary(n + 1).apply(cx.coboundary(n).apply(phi)), inst.p);
          ++res.checks;
          if (!detail::is_zero_vector(twice)) {
            res.ok = false;
            res.witness = "a double coboundary is nonzero over " +
                          std::string(inst.kind) + ", degree " +
                          std::to_string(n);
          }
          auto z = detail::random_vector(rng, inst.p, ch.space_dim(n + 2));
          auto btwice = ch.boundary(n + 1).apply(ch.boundary(n + 2).apply(z));
          ++res.checks;
          if (res.ok && !detail::is_zero_vector(btwice)) {
            res.ok = false;
            res.witness = "a double boundary is nonzero over " +
                          std::string(inst.kind) + ", degree " +
                          std::to_string(n + 2);
          }
        }
      if (!res.ok) break;
      ++res.checks;
      if (cx.cohomology(0).dim_H != fixed_points(v).dim()) {
        res.ok = false;
        res.witness = "degree zero differs from the fixed points over " +
                      std::string(inst.kind);
      }
      ++res.checks;
      if (res.ok &&
          ch.homology(0).dim_H != v.dim() - coinvariants(v).space().dim()) {
        res.ok = false;
        res.witness = "degree zero differs from the coinvariants over " +
                      std::string(inst.kind);
      }
    }
    if (!res.ok) break;
  }
  return res;
}

// Localization/splicing round trips, naturality with the coboundary, and the
// colimit checks on chains with a full top.
inline SuiteResult verify_localization(u64 seed) {
  SuiteResult res{"localization", 0, true, ""};
  SeededRng rng(seed ^ 0x10c);
  auto s4 = named_group("symmetric", 4);
  auto tower = SubgroupChain::from_generator_sets(
      s4, {{Permutation::from_cycles("(0 1)", 4)},
           {Permutation::from_cycles("(0 1)", 4),
            Permutation::from_cycles("(0 1 2)", 4)},
           {Permutation::from_cycles("(0 1)", 4),
            Permutation::from_cycles("(0 1 2 3)", 4)}});
  auto v = GModule::permutation(s4, 2);
  CochainComplex cx(v);
  std::vector<CochainComplex> level_cx;
  for (std::size_t i = 0; i < tower.size(); ++i)
    level_cx.emplace_back(restrict_module(v, tower.to_top(i)));
  for (std::size_t n = 0; n <= 2 && res.ok; ++n)
    for (int trial = 0; trial < 50 && res.ok; ++trial) {
      auto phi = detail::random_vector(rng, 2, cx.space_dim(n));
      auto fam = localize(tower, v, n, phi);
      ++res.checks;
      if (detail::mutate_vector("localization", splice(tower, v, fam), 2) !=
          phi) {
        res.ok = false;
        res.witness = "splice(localize(phi)) != phi at degree " +
                      std::to_string(n) + ", trial " + std::to_string(trial);
        break;
      }
      if (n == 2) continue;
      auto dfam = localize(tower, v, n + 1, cx.coboundary(n).apply(phi));
      for (std::size_t i = 0; i < tower.size(); ++i) {
        ++res.checks;
        if (dfam.levels[i] !=
            level_cx[i].coboundary(n).apply(fam.levels[i])) {
          res.ok = false;
          res.witness = "localization does not commute with the coboundary "
                        "at level " + std::to_string(i);
          break;
        }
      }
    }
  if (res.ok) {
    auto s3 = named_group("symmetric", 3);
    auto chain3 = SubgroupChain::from_generator_sets(
        s3, {{Permutation::from_cycles("(0 1)", 3)},
             {Permutation::from_cycles("(0 1)", 3),
              Permutation::from_cycles("(0 1 2)", 3)}});
    auto c4 = named_group("cyclic", 4);
    auto chain4 = SubgroupChain::from_generator_sets(
        c4, {{Permutation::from_cycles("(0 2)(1 3)")},
             {Permutation::from_cycles("(0 1 2 3)")}});
    for (std::size_t n = 0; n <= 1 && res.ok; ++n) {
      ++res.checks;
      if (!homology_colimit_check(chain3, GModule::permutation(s3, 2), n)) {
        res.ok = false;
        res.witness = "colimit check fails on the symmetric chain, degree " +
                      std::to_string(n);
      }
    }
    for (std::size_t n = 0; n <= 2 && res.ok; ++n) {
      ++res.checks;
      if (!homology_colimit_check(chain4, GModule::trivial(c4, 2), n)) {
        res.ok = false;
        res.witness = "colimit check fails on the cyclic chain, degree " +
                      std::to_string(n);
      }
    }
  }
  return res;
}

// Maschke instances decompose; complement projections are genuine
// equivariant idempotents onto their submodules.
inline SuiteResult verify_reducibility(u64 seed) {
  SuiteResult res{"reducibility", 0, true, ""};
  (void)seed;
  struct Inst {
    const char* kind;
    std::size_t size;
    u32 p;
    bool expect;
  };
  for (const Inst& inst :
       {Inst{"cyclic", 2, 3, true}, Inst{"cyclic", 3, 2, true},
        Inst{"dihedral", 4, 3, true}, Inst{"symmetric", 3, 3, false}}) {
    auto g = named_group(inst.kind, inst.size);
    auto v = GModule::permutation(g, inst.p);
    ++res.checks;
    if (is_completely_reducible(v) != inst.expect) {
      res.ok = false;
      res.witness = std::string("complete reducibility misjudged over ") +
                    inst.kind + "(" + std::to_string(inst.size) + "), p = " +
                    std::to_string(inst.p);
      return res;
    }
  }
  auto c3 = named_group("cyclic", 3);
  auto v = GModule::permutation(c3, 2);
  Submodule w(v, fixed_points(v));
  auto pi = find_complement(w);
  ++res.checks;
  if (!pi) {
    res.ok = false;
    res.witness = "no complement found for the fixed line in a coprime case";
    return res;
  }
  auto pim = *pi;
  if (detail::mutation_active("reducibility")) {
    std::vector<u32> tampered(pim.rows() * pim.cols());
    for (std::size_t r = 0; r < pim.rows(); ++r)
      pim.for_each_in_row(u32(r),
                          [&](u32 c, u32 val) { tampered[r * pim.cols() + c] = val; });
    tampered[0] = (tampered[0] + 1) % 2;
    pim = FpMatrix::from_dense(2, pim.rows(), pim.cols(), tampered);
  }
  ++res.checks;
  if (!((pim * pim) == pim)) {
    res.ok = false;
    res.witness = "complement projection is not idempotent";
    return res;
  }
  for (const auto& gp : c3->generators()) {
    const u32 gi = *c3->index_of(gp);
    ++res.checks;
    if (!(pim * v.action(gi) == v.action(gi) * pim)) {
      res.ok = false;
      res.witness = "complement projection does not commute with the action";
      return res;
    }
  }
  ++res.checks;
  if (!(image_basis(pim) == w.space())) {
    res.ok = false;
    res.witness = "complement projection does not land on the submodule";
  }
  return res;
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "annihilators", "duality", "complexes", "localization", "reducibility"};
  return names;
}

inline SuiteResult run_verify_suite(const std::string& name, u64 seed) {
  if (name == "annihilators") return verify_annihilators(seed);
  if (name == "duality") return verify_duality(seed);
  if (name == "complexes") return verify_complexes(seed);
  if (name == "localization") return verify_localization(seed);
  if (name == "reducibility") return verify_reducibility(seed);
  throw Error("unknown verify suite \"" + name + "\"");
}

}  // namespace locoh
