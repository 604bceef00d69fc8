#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "locoh/les.hpp"
#include "locoh/local_system.hpp"
#include "locoh/rng.hpp"
#include "oracle.hpp"

using namespace locoh;
using Catch::Matchers::ContainsSubstring;

namespace {

// Sym(2) < Sym(3) < Sym(4) on four points.
SubgroupChain symmetric_tower() {
  auto s4 = named_group("symmetric", 4);
  return SubgroupChain::from_generator_sets(
      s4, {{Permutation::from_cycles("(0 1)", 4)},
           {Permutation::from_cycles("(0 1)", 4),
            Permutation::from_cycles("(0 1 2)", 4)},
           {Permutation::from_cycles("(0 1)", 4),
            Permutation::from_cycles("(0 1 2 3)", 4)}});
}

std::vector<u32> random_vector(SeededRng& rng, u32 p, std::size_t n) {
  std::vector<u32> v(n);
  for (auto& c : v) c = rng.fp_value(p);
  return v;
}

}  // namespace

TEST_CASE("subgroup chains check containment as they are built") {
  auto tower = symmetric_tower();
  REQUIRE(tower.size() == 3);
  REQUIRE(tower.level(0)->order() == 2);
  REQUIRE(tower.level(1)->order() == 6);
  REQUIRE(tower.level(2)->order() == 24);
  REQUIRE(tower.top_is_full());
  REQUIRE(same_group(tower.level(2), tower.ambient()));
  // Composed and direct inclusions agree element by element.
  for (u32 i = 0; i < tower.level(0)->order(); ++i)
    REQUIRE(tower.step(0).then(tower.to_top(1)).map(i) == tower.to_top(0).map(i));

  auto s4 = named_group("symmetric", 4);
  REQUIRE_THROWS_WITH(
      SubgroupChain::from_generator_sets(
          s4, {{Permutation::from_cycles("(0 1 2)", 4)},
               {Permutation::from_cycles("(0 1)", 4)}}),
      ContainsSubstring("level 0 is not contained in level 1"));
  REQUIRE_THROWS_WITH(
      SubgroupChain::from_generator_sets(
          s4, {{Permutation::from_cycles("(0 1)", 3)}}),
      ContainsSubstring("not an element of the ambient group"));
  REQUIRE_THROWS_WITH(SubgroupChain::from_generator_sets(s4, {}),
                      ContainsSubstring("at least one level"));

  auto with_trivial = SubgroupChain::from_generator_sets(
      s4, {{}, {Permutation::from_cycles("(0 1)", 4)}});
  REQUIRE(with_trivial.level(0)->order() == 1);
  REQUIRE_FALSE(with_trivial.top_is_full());

  auto single = SubgroupChain::from_generator_sets(
      s4, {{Permutation::from_cycles("(0 1)", 4),
            Permutation::from_cycles("(0 1 2 3)", 4)}});
  REQUIRE(single.size() == 1);
  REQUIRE(single.top_is_full());
}

TEST_CASE("localize and splice invert each other exactly") {
  auto tower = symmetric_tower();
  auto v = GModule::permutation(tower.ambient(), 2);
  CochainComplex cx(v);
  SeededRng rng(0x6c6f63);
  for (std::size_t n = 0; n <= 2; ++n)
    for (int trial = 0; trial < 50; ++trial) {
      auto phi = random_vector(rng, 2, cx.space_dim(n));
      auto fam = localize(tower, v, n, phi);
      REQUIRE(fam.levels.size() == 3);
      REQUIRE(splice(tower, v, fam) == phi);
      auto again = localize(tower, v, n, splice(tower, v, fam));
      REQUIRE(again.levels == fam.levels);
    }

  SECTION("localizing a cocycle gives cocycles at every level") {
    const auto& rep = cx.cohomology(1).cocycle_reps.at(0);
    auto fam = localize(tower, v, 1, rep);
    for (std::size_t i = 0; i < tower.size(); ++i) {
      CochainComplex level_cx(restrict_module(v, tower.to_top(i)));
      auto image = level_cx.coboundary(1).apply(fam.levels[i]);
      for (u32 c : image) REQUIRE(c == 0);
    }
  }

  SECTION("zero localizes to zero") {
    auto fam = localize(tower, v, 1, std::vector<u32>(cx.space_dim(1), 0));
    for (const auto& lev : fam.levels)
      for (u32 c : lev) REQUIRE(c == 0);
  }
}

TEST_CASE("splice rejects incompatible families and names the break") {
  auto tower = symmetric_tower();
  auto v = GModule::permutation(tower.ambient(), 2);
  CochainComplex cx(v);
  SeededRng rng(0x627273);
  auto phi = random_vector(rng, 2, cx.space_dim(1));
  auto fam = localize(tower, v, 1, phi);

  SECTION("corrupting the bottom cochain breaks the first inclusion") {
    auto broken = fam;
    broken.levels[0][0] ^= 1;
    REQUIRE_THROWS_WITH(splice(tower, v, broken),
                        ContainsSubstring("level 0 in level 1"));
  }

  SECTION("corruption invisible to the bottom breaks the second inclusion") {
    // Entry at an element of the middle level outside the bottom subgroup.
    const u32 transposition_idx = tower.step(0).map(1);
    u32 other = 0;
    for (u32 e = 1; e < tower.level(1)->order(); ++e)
      if (e != transposition_idx) {
        other = e;
        break;
      }
    auto broken = fam;
    broken.levels[1][(other - 1) * v.dim()] ^= 1;
    REQUIRE_THROWS_WITH(splice(tower, v, broken),
                        ContainsSubstring("level 1 in level 2"));
  }

  SECTION("level count and chain shape are validated") {
    auto broken = fam;
    broken.levels.pop_back();
    REQUIRE_THROWS_WITH(splice(tower, v, broken),
                        ContainsSubstring("2 cochains for 3 levels"));

    auto s4 = named_group("symmetric", 4);
    auto partial = SubgroupChain::from_generator_sets(
        s4, {{Permutation::from_cycles("(0 1)", 4)},
             {Permutation::from_cycles("(0 1)", 4),
              Permutation::from_cycles("(0 1 2)", 4)}});
    auto partial_fam = localize(partial, v, 1, phi);
    REQUIRE_THROWS_WITH(splice(partial, v, partial_fam),
                        ContainsSubstring("not the whole group"));

    auto s3 = named_group("symmetric", 3);
    REQUIRE_THROWS_AS(localize(tower, GModule::permutation(s3, 2), 0, {0, 0, 0}),
                      Error);
  }
}

TEST_CASE("localization commutes with the coboundary") {
  auto tower = symmetric_tower();
  auto v = GModule::permutation(tower.ambient(), 2);
  CochainComplex cx(v);
  std::vector<CochainComplex> level_cx;
  for (std::size_t i = 0; i < tower.size(); ++i)
    level_cx.emplace_back(restrict_module(v, tower.to_top(i)));
  SeededRng rng(0x6e6174);
  for (std::size_t n = 0; n <= 2; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      auto phi = random_vector(rng, 2, cx.space_dim(n));
      auto below = localize(tower, v, n + 1, cx.coboundary(n).apply(phi));
      auto above = localize(tower, v, n, phi);
      for (std::size_t i = 0; i < tower.size(); ++i)
        REQUIRE(below.levels[i] ==
                level_cx[i].coboundary(n).apply(above.levels[i]));
    }
}

TEST_CASE("colimit checks pass on chains that reach their top") {
  SECTION("single level") {
    auto s3 = named_group("symmetric", 3);
    auto chain = SubgroupChain::from_generator_sets(
        s3, {{Permutation::from_cycles("(0 1)", 3), Permutation::from_cycles("(0 1 2)")}});
    auto v = GModule::permutation(s3, 2);
    for (std::size_t n = 0; n <= 1; ++n)
      REQUIRE(homology_colimit_check(chain, v, n));
  }

  SECTION("transpositions inside the symmetric group on three points") {
    auto s3 = named_group("symmetric", 3);
    auto chain = SubgroupChain::from_generator_sets(
        s3, {{Permutation::from_cycles("(0 1)", 3)},
             {Permutation::from_cycles("(0 1)", 3), Permutation::from_cycles("(0 1 2)")}});
    auto v = GModule::permutation(s3, 2);
    for (std::size_t n = 0; n <= 1; ++n)
      REQUIRE(homology_colimit_check(chain, v, n));
  }

  SECTION("cyclic subgroups of the cyclic group of order four") {
    auto c4 = named_group("cyclic", 4);
    auto chain = SubgroupChain::from_generator_sets(
        c4, {{Permutation::from_cycles("(0 2)(1 3)")},
             {Permutation::from_cycles("(0 1 2 3)")}});
    REQUIRE(chain.level(0)->order() == 2);
    REQUIRE(chain.top_is_full());
    auto v = GModule::trivial(c4, 2);
    for (std::size_t n = 0; n <= 2; ++n)
      REQUIRE(homology_colimit_check(chain, v, n));
  }

  SECTION("group mismatch is rejected") {
    auto s3 = named_group("symmetric", 3);
    auto chain = SubgroupChain::from_generator_sets(
        s3, {{Permutation::from_cycles("(0 1)", 3), Permutation::from_cycles("(0 1 2)")}});
    REQUIRE_THROWS_WITH(
        homology_colimit_check(chain, GModule::trivial(named_group("cyclic", 2), 2), 0),
        ContainsSubstring("different group"));
  }
}

TEST_CASE("survival analysis tabulates restriction images") {
  auto tower = symmetric_tower();
  auto v = GModule::permutation(tower.ambient(), 2);
  auto report = survival_analysis(tower, v, 1);

  REQUIRE(report.level_dims.size() == 3);
  for (std::size_t i = 0; i < tower.size(); ++i) {
    auto restricted = restrict_module(v, tower.to_top(i));
    REQUIRE(report.level_dims[i] == oracle::naive_cohomology(restricted, 1).h);
  }
  REQUIRE(report.level_dims == std::vector<std::size_t>{2, 2, 1});

  for (std::size_t i = 0; i < report.image_dims.size(); ++i) {
    const auto& images = report.image_dims[i];
    REQUIRE(images.size() == tower.size() - i - 1);
    for (std::size_t k = 0; k + 1 < images.size(); ++k)
      REQUIRE(images[k] >= images[k + 1]);
    for (std::size_t k = 0; k < images.size(); ++k)
      REQUIRE(images[k] <= report.level_dims[i]);
    if (!images.empty()) REQUIRE(report.stable_dims[i] == images.back());
  }
  REQUIRE(report.stable_dims.back() == report.level_dims.back());

  SECTION("reports add over direct sums of coefficients") {
    auto a = GModule::permutation(tower.ambient(), 2);
    auto b = GModule::trivial(tower.ambient(), 2);
    auto whole = survival_analysis(tower, direct_sum(a, b), 1);
    auto ra = survival_analysis(tower, a, 1);
    auto rb = survival_analysis(tower, b, 1);
    for (std::size_t i = 0; i < whole.level_dims.size(); ++i) {
      REQUIRE(whole.level_dims[i] == ra.level_dims[i] + rb.level_dims[i]);
      for (std::size_t k = 0; k < whole.image_dims[i].size(); ++k)
        REQUIRE(whole.image_dims[i][k] ==
                ra.image_dims[i][k] + rb.image_dims[i][k]);
    }
  }
}

TEST_CASE("hypothesis record on the augmentation coefficients") {
  auto s3 = named_group("symmetric", 3);
  auto chain = SubgroupChain::from_generator_sets(
      s3, {{Permutation::from_cycles("(0 1)", 3)},
           {Permutation::from_cycles("(0 1)", 3), Permutation::from_cycles("(0 1 2)")}});
  auto perm = GModule::permutation(s3, 2);
  auto aug = augmentation_sequence(s3, 2).left;

  auto report = hypothesis_checks(chain, aug, perm);
  // The sum-zero plane has no trivial quotient in characteristic two.
  REQUIRE(report.radical_fills);
  REQUIRE(report.trivial_h1 == 1);
  REQUIRE(report.level_h1 == std::vector<std::size_t>{1, 1});
  REQUIRE(report.level_fixed == std::vector<std::size_t>{2, 1});

  auto p3_report =
      hypothesis_checks(chain, GModule::trivial(s3, 3), GModule::permutation(s3, 3));
  REQUIRE(p3_report.trivial_h1 == 0);
  REQUIRE_FALSE(p3_report.radical_fills);
}
