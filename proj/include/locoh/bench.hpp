#pragma once

#include <chrono>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/duality.hpp"
#include "locoh/les.hpp"
#include "locoh/local_system.hpp"
#include "locoh/verify.hpp"

// Timing profiles behind the `bench` subcommand.  The small profile walks the
// acceptance-scale computations; the stretch profile pushes degree-two
// cohomology of the five-point permutation module, where the differential
// outgrows the elimination caps and the decline path gets exercised.

namespace locoh {

struct BenchRow {
  std::string name;
  std::string detail;
  double ms = 0.0;
  std::string status;
};

namespace detail {

class BenchTimer {
 public:
  BenchTimer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
BenchRow bench_row(const std::string& name, Fn&& fn) {
  BenchRow row{name, "", 0.0, "ok"};
  BenchTimer timer;
  try {
    row.detail = fn();
  } catch (const CapError& e) {
    row.status = std::string("declined: ") + e.what();
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
  }
  row.ms = timer.ms();
  return row;
}

inline std::vector<GModule> bench_module_menu(const GroupPtr& g, u32 p) {
  std::vector<GModule> menu = {GModule::trivial(g, p),
                               GModule::permutation(g, p)};
  if (g->order() <= 8) menu.push_back(GModule::regular(g, p));
  return menu;
}

inline std::vector<std::pair<const char*, std::size_t>> bench_group_menu() {
  return {{"cyclic", 2}, {"cyclic", 3}, {"symmetric", 3}, {"dihedral", 4}};
}

}  // namespace detail

inline std::vector<BenchRow> bench_small() {
  using detail::bench_row;
  std::vector<BenchRow> rows;

  rows.push_back(bench_row("annihilator identities", [] {
    auto res = verify_annihilators(0);
    if (!res.ok) throw Error(res.witness);
    return std::to_string(res.checks) + " checks, p in {2, 3, 5}, dim <= 8";
  }));

  rows.push_back(bench_row("ext/tor duality grid", [] {
    std::size_t count = 0;
    const auto group_menu = detail::bench_group_menu();
    for (const auto& spec : group_menu) {
      auto g = named_group(spec.first, spec.second);
      for (u32 p : {2u, 3u})
        for (const auto& x : detail::bench_module_menu(g, p))
          for (const auto& y : detail::bench_module_menu(g, p))
            for (std::size_t n = 0; n <= 2; ++n) {
              duality_certificate(x, y, n);
              ++count;
            }
    }
    return std::to_string(count) + " nonsingular certificates";
  }));

  rows.push_back(bench_row("differential composites", [] {
    auto res = verify_complexes(0);
    if (!res.ok) throw Error(res.witness);
    return std::to_string(res.checks) + " checks";
  }));

  rows.push_back(bench_row("cyclic prime cohomology", [] {
    for (u32 p : {2u, 3u, 5u}) {
      auto v = GModule::trivial(named_group("cyclic", p), p);
      CochainComplex cx(v);
      for (std::size_t n = 0; n <= 2; ++n)
        if (cx.cohomology(n).dim_H != 1)
          throw Error("cyclic dimension is off at p = " + std::to_string(p));
    }
    return "dims 1,1,1 for p in {2, 3, 5}";
  }));

  rows.push_back(bench_row("permutation-module transfer", [] {
    for (std::size_t m : {std::size_t(3), std::size_t(4)})
      for (u32 p : {2u, 3u}) {
        CochainComplex big(
            GModule::permutation(named_group("symmetric", m), p));
        CochainComplex small_cx(
            GModule::trivial(named_group("symmetric", m - 1), p));
        for (std::size_t n = 0; n <= 2; ++n)
          if (big.cohomology(n).dim_H != small_cx.cohomology(n).dim_H)
            throw Error("transfer dimensions differ at m = " +
                        std::to_string(m));
      }
    return "Sym(3) and Sym(4) against point stabilizers, degrees <= 2";
  }));

  rows.push_back(bench_row("localization round trips", [] {
    auto res = verify_localization(0);
    if (!res.ok) throw Error(res.witness);
    return std::to_string(res.checks) + " checks";
  }));

  rows.push_back(bench_row("long exact sequences", [] {
    for (u32 p : {2u, 3u}) {
      auto ses = augmentation_sequence(named_group("symmetric", 3), p);
      auto les = long_exact_sequence(ses, 2);
      if (!les.exact()) throw Error("augmentation sequence fails at p = " +
                                    std::to_string(p));
    }
    return "augmentation coefficients over GF(2) and GF(3), degrees <= 2";
  }));

  rows.push_back(bench_row("complete reducibility", [] {
    auto res = verify_reducibility(0);
    if (!res.ok) throw Error(res.witness);
    return std::to_string(res.checks) + " checks";
  }));

  rows.push_back(bench_row("dual coinvariants", [] {
    std::size_t count = 0;
    const auto group_menu = detail::bench_group_menu();
    for (const auto& spec : group_menu) {
      auto g = named_group(spec.first, spec.second);
      for (u32 p : {2u, 3u})
        for (const auto& v : detail::bench_module_menu(g, p)) {
          if (!dual_coinvariants_check(v))
            throw Error("dual coinvariants mismatch");
          ++count;
        }
    }
    return std::to_string(count) + " modules";
  }));

  rows.push_back(bench_row("survival images", [] {
    auto s4 = named_group("symmetric", 4);
    auto tower = SubgroupChain::from_generator_sets(
        s4, {{Permutation::from_cycles("(0 1)", 4)},
             {Permutation::from_cycles("(0 1)", 4),
              Permutation::from_cycles("(0 1 2)", 4)},
             {Permutation::from_cycles("(0 1)", 4),
              Permutation::from_cycles("(0 1 2 3)", 4)}});
    auto report = survival_analysis(tower, GModule::permutation(s4, 2), 1);
    std::ostringstream d;
    d << "level dims";
    for (auto v : report.level_dims) d << " " << v;
    return d.str();
  }));

  return rows;
}

inline std::vector<BenchRow> bench_stretch() {
  using detail::bench_row;
  std::vector<BenchRow> rows;
  auto s5 = named_group("symmetric", 5);
  auto v = GModule::permutation(s5, 2);

  rows.push_back(bench_row("sym5 permutation degree 1", [&] {
    CochainComplex cx(v);
    const auto& res = cx.cohomology(1);
    std::ostringstream d;
    d << "dim " << res.dim_H << ", d1 is " << cx.space_dim(2) << " x "
      << cx.space_dim(1);
    return d.str();
  }));

  rows.push_back(bench_row("sym5 permutation degree 2", [&] {
    CochainComplex cx(v);
    std::ostringstream d;
    d << "d2 is " << cx.space_dim(3) << " x " << cx.space_dim(2);
    const auto& res = cx.cohomology(2);
    d << ", dim " << res.dim_H;
    return d.str();
  }));
  if (rows.back().detail.empty()) {
    CochainComplex cx(v);
    std::ostringstream d;
    d << "d2 is " << cx.space_dim(3) << " x " << cx.space_dim(2);
    rows.back().detail = d.str();
  }

  return rows;
}

inline std::vector<BenchRow> bench_profile(const std::string& profile) {
  if (profile.empty()) return {};
  if (profile == "small") return bench_small();
  if (profile == "stretch") return bench_stretch();
  throw Error("unknown bench profile \"" + profile + "\"");
}

inline std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  std::size_t name_width = 4;
  for (const auto& r : rows) name_width = std::max(name_width, r.name.size());
  out << std::left << std::setw(int(name_width)) << "name"
      << "  " << std::right << std::setw(10) << "ms"
      << "  result\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(int(name_width)) << r.name << "  "
        << std::right << std::setw(10) << std::fixed << std::setprecision(1)
        << r.ms << "  " << r.status;
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  if (rows.empty()) out << "(no rows)\n";
  return out.str();
}

}  // namespace locoh
