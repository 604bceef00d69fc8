#pragma once

#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "locoh/bar_complex.hpp"
#include "locoh/duality.hpp"
#include "locoh/les.hpp"
#include "locoh/local_system.hpp"
#include "locoh/report.hpp"
#include "locoh/rng.hpp"
#include "locoh/scenario.hpp"

// Name resolution and task execution for parsed scenarios.

namespace locoh {

struct TaskError : Error {
  TaskError(std::size_t index, const std::string& kind, const std::string& what)
      : Error("task " + std::to_string(index) + " (" + kind + "): " + what),
        index(index) {}
  std::size_t index;
};

// Groups, modules, and chains built from the definitions of one scenario.
// Construction performs all name and cap validation.
class ScenarioContext {
 public:
  explicit ScenarioContext(const Scenario& sc) : sc_(sc) {
    for (const auto& g : sc.groups) build_group(g);
    for (const auto& m : sc.modules) build_module(m);
    for (const auto& c : sc.chains) build_chain(c);
  }

  const Scenario& scenario() const { return sc_; }

  const GroupPtr& group(const std::string& name, std::size_t line) const {
    auto it = groups_.find(name);
    if (it == groups_.end())
      throw ValidationError("line " + std::to_string(line) +
                            ": undefined group name \"" + name + "\"");
    return it->second;
  }

  const GModule& module(const std::string& name, std::size_t line) const {
    auto it = modules_.find(name);
    if (it == modules_.end())
      throw ValidationError("line " + std::to_string(line) +
                            ": undefined module name \"" + name + "\"");
    return it->second;
  }

  const SubgroupChain& chain(const std::string& name, std::size_t line) const {
    auto it = chains_.find(name);
    if (it == chains_.end())
      throw ValidationError("line " + std::to_string(line) +
                            ": undefined chain name \"" + name + "\"");
    return it->second;
  }

 private:
  void build_group(const GroupDef& def) {
    try {
      if (def.kind == "generators") {
        std::size_t degree = def.degree;
        std::vector<Permutation> parsed;
        for (const auto& text : def.generator_texts) {
          parsed.push_back(Permutation::from_cycles(text));
          degree = std::max(degree, parsed.back().degree());
        }
        std::vector<Permutation> gens;
        for (const auto& text : def.generator_texts)
          gens.push_back(Permutation::from_cycles(text, degree));
        groups_.emplace(def.name,
                        share(FiniteGroup::from_generators(gens, sc_.order_cap)));
      } else {
        groups_.emplace(def.name,
                        named_group(def.kind, def.size, sc_.order_cap));
      }
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(def.line) + ": group \"" +
                            def.name + "\": " + e.what());
    }
  }

  void build_module(const ModuleDef& def) {
    const u32 p = sc_.characteristic;
    try {
      if (def.op == "trivial") {
        modules_.emplace(def.name,
                         GModule::trivial(group(def.args[0], def.line), p,
                                          def.dim));
      } else if (def.op == "permutation") {
        modules_.emplace(def.name,
                         GModule::permutation(group(def.args[0], def.line), p));
      } else if (def.op == "regular") {
        modules_.emplace(def.name,
                         GModule::regular(group(def.args[0], def.line), p));
      } else if (def.op == "augmentation") {
        modules_.emplace(def.name,
                         augmentation_sequence(group(def.args[0], def.line), p)
                             .left);
      } else if (def.op == "dual") {
        modules_.emplace(def.name, dual(module(def.args[0], def.line)));
      } else if (def.op == "tensor") {
        modules_.emplace(def.name, tensor(module(def.args[0], def.line),
                                          module(def.args[1], def.line)));
      } else if (def.op == "hom") {
        modules_.emplace(def.name, hom(module(def.args[0], def.line),
                                       module(def.args[1], def.line)));
      } else if (def.op == "sum") {
        modules_.emplace(def.name, direct_sum(module(def.args[0], def.line),
                                              module(def.args[1], def.line)));
      } else if (def.op == "restrict") {
        const auto& v = module(def.args[0], def.line);
        const auto& sub = group(def.args[1], def.line);
        modules_.emplace(
            def.name,
            restrict_module(v, SubgroupEmbedding::from_groups(sub, v.group())));
      } else if (def.op == "matrices") {
        const auto& g = group(def.args[0], def.line);
        std::vector<FpMatrix> mats;
        for (const auto& block : def.entries) {
          for (u32 e : block)
            if (e >= p)
              throw Error("entry " + std::to_string(e) +
                          " is not reduced modulo " + std::to_string(p));
          mats.push_back(
              FpMatrix::from_dense(p, def.dim, def.dim, block));
        }
        modules_.emplace(def.name,
                         GModule::from_matrices(g, p, std::move(mats)));
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(def.line) +
                            ": module \"" + def.name + "\": " + e.what());
    }
  }

  void build_chain(const ChainDef& def) {
    try {
      const auto& ambient = group(def.ambient, def.line);
      std::vector<std::vector<Permutation>> level_gens;
      for (const auto& name : def.levels)
        level_gens.push_back(group(name, def.line)->generators());
      chains_.emplace(def.name,
                      SubgroupChain::from_generator_sets(ambient, level_gens));
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(def.line) + ": chain \"" +
                            def.name + "\": " + e.what());
    }
  }

  const Scenario& sc_;
  std::map<std::string, GroupPtr> groups_;
  std::map<std::string, GModule> modules_;
  std::map<std::string, SubgroupChain> chains_;
};

namespace detail {

inline void require_args(const TaskDef& t, std::size_t n) {
  if (t.args.size() != n)
    throw ValidationError("line " + std::to_string(t.line) + ": task " +
                          t.kind + " takes " + std::to_string(n) +
                          " name argument(s), got " +
                          std::to_string(t.args.size()));
}

inline void forbid_option(const TaskDef& t, bool present, const char* name) {
  if (present)
    throw ValidationError("line " + std::to_string(t.line) + ": option " +
                          name + " does not apply to task " + t.kind);
}

inline std::size_t effective_max_degree(const Scenario& sc, const TaskDef& t) {
  const std::size_t n = t.has_max_degree ? t.max_degree : sc.max_degree;
  if (n > sc.max_degree)
    throw ValidationError("line " + std::to_string(t.line) + ": max_degree " +
                          std::to_string(n) + " exceeds the scenario cap " +
                          std::to_string(sc.max_degree));
  return n;
}

}  // namespace detail

// Shape-level validation of one task: known kind, defined names, caps.
// Performed for every task before any task runs.
inline void validate_task(const ScenarioContext& ctx, const TaskDef& t) {
  using detail::forbid_option;
  using detail::require_args;
  const auto& sc = ctx.scenario();
  static const std::vector<std::string> kinds = {
      "cohomology",   "homology",
      "ext",          "tor",
      "duality_certificate",
      "les",          "localize_splice_roundtrip",
      "survival",     "hypothesis_checks",
      "complete_reducibility"};
  bool known = false;
  for (const auto& k : kinds) known |= k == t.kind;
  if (!known)
    throw ValidationError("line " + std::to_string(t.line) +
                          ": unknown task kind \"" + t.kind + "\"");
  if (t.kind != "les") forbid_option(t, t.split, "split");
  if (t.kind != "localize_splice_roundtrip")
    forbid_option(t, t.has_count, "count");
  if (t.kind != "survival") forbid_option(t, t.has_degree, "degree");

  if (t.kind == "cohomology" || t.kind == "homology" ||
      t.kind == "complete_reducibility") {
    require_args(t, 1);
    ctx.module(t.args[0], t.line);
  } else if (t.kind == "ext" || t.kind == "tor" ||
             t.kind == "duality_certificate") {
    require_args(t, 2);
    ctx.module(t.args[0], t.line);
    ctx.module(t.args[1], t.line);
  } else if (t.kind == "les") {
    require_args(t, 1);
    ctx.group(t.args[0], t.line);
  } else if (t.kind == "localize_splice_roundtrip" || t.kind == "survival") {
    require_args(t, 2);
    ctx.chain(t.args[0], t.line);
    ctx.module(t.args[1], t.line);
  } else if (t.kind == "hypothesis_checks") {
    require_args(t, 3);
    ctx.chain(t.args[0], t.line);
    ctx.module(t.args[1], t.line);
    ctx.module(t.args[2], t.line);
  }
  if (t.kind == "complete_reducibility" || t.kind == "hypothesis_checks") {
    forbid_option(t, t.has_max_degree, "max_degree");
  } else if (t.kind == "survival") {
    if (t.has_degree && t.degree > sc.max_degree)
      throw ValidationError("line " + std::to_string(t.line) + ": degree " +
                            std::to_string(t.degree) +
                            " exceeds the scenario cap " +
                            std::to_string(sc.max_degree));
  } else {
    detail::effective_max_degree(sc, t);
  }
}

// Execute one task; returns {inputs, result} as JSON values.
inline std::pair<json, json> execute_task(const ScenarioContext& ctx,
                                          const TaskDef& t) {
  const auto& sc = ctx.scenario();
  json inputs = json::object();
  json result = json::object();

  if (t.kind == "cohomology" || t.kind == "homology") {
    const std::size_t n = detail::effective_max_degree(sc, t);
    inputs["module"] = t.args[0];
    inputs["max_degree"] = n;
    std::vector<std::size_t> dims;
    if (t.kind == "cohomology") {
      CochainComplex cx(ctx.module(t.args[0], t.line));
      for (std::size_t d = 0; d <= n; ++d)
        dims.push_back(cx.cohomology(d).dim_H);
    } else {
      ChainComplex cx(ctx.module(t.args[0], t.line));
      for (std::size_t d = 0; d <= n; ++d) dims.push_back(cx.homology(d).dim_H);
    }
    result["dims"] = dims;
  } else if (t.kind == "ext" || t.kind == "tor") {
    const std::size_t n = detail::effective_max_degree(sc, t);
    inputs["x"] = t.args[0];
    inputs["y"] = t.args[1];
    inputs["max_degree"] = n;
    const auto& x = ctx.module(t.args[0], t.line);
    const auto& y = ctx.module(t.args[1], t.line);
    std::vector<std::size_t> dims;
    if (t.kind == "ext") {
      CochainComplex cx(hom(x, y));
      for (std::size_t d = 0; d <= n; ++d)
        dims.push_back(cx.cohomology(d).dim_H);
    } else {
      ChainComplex cx(tensor(x, y));
      for (std::size_t d = 0; d <= n; ++d) dims.push_back(cx.homology(d).dim_H);
    }
    result["dims"] = dims;
  } else if (t.kind == "duality_certificate") {
    const std::size_t n = detail::effective_max_degree(sc, t);
    inputs["x"] = t.args[0];
    inputs["y"] = t.args[1];
    inputs["max_degree"] = n;
    const auto& x = ctx.module(t.args[0], t.line);
    const auto& y = ctx.module(t.args[1], t.line);
    std::vector<std::size_t> dims;
    std::vector<bool> nonsingular;
    for (std::size_t d = 0; d <= n; ++d) {
      auto cert = duality_certificate(x, y, d);
      dims.push_back(cert.ext_dim);
      nonsingular.push_back(true);
    }
    result["dims"] = dims;
    result["nonsingular"] = nonsingular;
  } else if (t.kind == "les") {
    const std::size_t n = detail::effective_max_degree(sc, t);
    inputs["group"] = t.args[0];
    inputs["split"] = t.split;
    inputs["max_degree"] = n;
    const auto& g = ctx.group(t.args[0], t.line);
    const u32 p = sc.characteristic;
    auto ses = t.split
                   ? split_sequence(GModule::trivial(g, p),
                                    GModule::permutation(g, p))
                   : augmentation_sequence(g, p);
    auto les = long_exact_sequence(ses, n);
    result["exact"] = les.exact();
    result["dims_left"] = les.dims_left;
    result["dims_middle"] = les.dims_middle;
    result["dims_right"] = les.dims_right;
    std::vector<std::size_t> connecting;
    for (const auto& m : les.connecting_maps) connecting.push_back(rank(m));
    result["connecting_ranks"] = connecting;
  } else if (t.kind == "localize_splice_roundtrip") {
    const std::size_t n = detail::effective_max_degree(sc, t);
    const std::size_t count = t.has_count ? t.count : 10;
    inputs["chain"] = t.args[0];
    inputs["module"] = t.args[1];
    inputs["max_degree"] = n;
    inputs["count"] = count;
    const auto& chain = ctx.chain(t.args[0], t.line);
    const auto& v = ctx.module(t.args[1], t.line);
    SeededRng rng(sc.seed ^ fnv1a64(Scenario::task_line(t)));
    CochainComplex cx(v);
    bool ok = true;
    for (std::size_t d = 0; d <= n && ok; ++d)
      for (std::size_t c = 0; c < count && ok; ++c) {
        std::vector<u32> phi(cx.space_dim(d));
        for (auto& e : phi) e = rng.fp_value(sc.characteristic);
        auto fam = localize(chain, v, d, phi);
        ok = splice(chain, v, fam) == phi;
        if (ok) ok = localize(chain, v, d, splice(chain, v, fam)).levels ==
                     fam.levels;
      }
    result["trials_per_degree"] = count;
    result["ok"] = ok;
  } else if (t.kind == "survival") {
    const std::size_t n = t.has_degree ? t.degree : 1;
    inputs["chain"] = t.args[0];
    inputs["module"] = t.args[1];
    inputs["degree"] = n;
    auto report = survival_analysis(ctx.chain(t.args[0], t.line),
                                    ctx.module(t.args[1], t.line), n);
    bool monotone = true;
    for (const auto& images : report.image_dims)
      for (std::size_t k = 0; k + 1 < images.size(); ++k)
        monotone &= images[k] >= images[k + 1];
    result["level_dims"] = report.level_dims;
    result["image_dims"] = report.image_dims;
    result["stable_dims"] = report.stable_dims;
    result["weakly_decreasing"] = monotone;
  } else if (t.kind == "hypothesis_checks") {
    inputs["chain"] = t.args[0];
    inputs["u"] = t.args[1];
    inputs["v"] = t.args[2];
    auto rec = hypothesis_checks(ctx.chain(t.args[0], t.line),
                                 ctx.module(t.args[1], t.line),
                                 ctx.module(t.args[2], t.line));
    result["radical_fills"] = rec.radical_fills;
    result["trivial_h1"] = rec.trivial_h1;
    result["level_h1"] = rec.level_h1;
    result["level_fixed"] = rec.level_fixed;
  } else if (t.kind == "complete_reducibility") {
    inputs["module"] = t.args[0];
    result["completely_reducible"] =
        is_completely_reducible(ctx.module(t.args[0], t.line));
  }
  return {std::move(inputs), std::move(result)};
}

struct RunOptions {
  std::string cache_dir;  // empty: no cache
  bool stable_output = false;
};

inline Report run_scenario(const Scenario& sc, const RunOptions& opts = {}) {
  Report report;
  report.hash = hex64(fnv1a64(sc.canonical_text()));
  ScenarioContext ctx(sc);
  for (const auto& t : sc.tasks) validate_task(ctx, t);

  Scenario defs_only = sc;
  defs_only.tasks.clear();
  const std::string defs_fragment = defs_only.canonical_text();

  for (std::size_t i = 0; i < sc.tasks.size(); ++i) {
    const auto& t = sc.tasks[i];
    const auto start = std::chrono::steady_clock::now();
    json inputs, result;
    bool cached = false;
    const std::string key = hex64(fnv1a64(defs_fragment + Scenario::task_line(t) +
                                          "\n" + kVersion));
    if (!opts.cache_dir.empty()) {
      ResultCache cache(opts.cache_dir);
      json entry;
      if (cache.lookup(key, entry) && entry.contains("inputs") &&
          entry.contains("result")) {
        inputs = entry["inputs"];
        result = entry["result"];
        cached = true;
      }
    }
    if (!cached) {
      try {
        std::tie(inputs, result) = execute_task(ctx, t);
      } catch (const ValidationError&) {
        throw;
      } catch (const Error& e) {
        throw TaskError(i, t.kind, e.what());
      }
      if (!opts.cache_dir.empty()) {
        json entry;
        entry["inputs"] = inputs;
        entry["result"] = result;
        ResultCache(opts.cache_dir).store(key, entry);
      }
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    json record;
    record["id"] = i;
    record["kind"] = t.kind;
    record["inputs"] = inputs;
    record["result"] = result;
    record["ms"] = opts.stable_output ? 0 : u64(elapsed);
    report.tasks.push_back(std::move(record));
  }
  return report;
}

}  // namespace locoh
