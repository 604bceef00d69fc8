// Command line front end: run scenario files, verify property suites, and
// time the bench profiles.  Exit codes: 0 success, 1 usage or suite failure,
// 2 scenario parse error, 3 validation error, 4 task error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "locoh/bench.hpp"
#include "locoh/runner.hpp"
#include "locoh/verify.hpp"

namespace {

int run_command(const std::string& path, const std::string& out_path,
                const std::string& format, const std::string& cache_flag,
                bool has_max_degree, std::size_t max_degree, bool has_seed,
                locoh::u64 seed, bool stable_output) {
  locoh::Scenario sc;
  try {
    sc = locoh::load_scenario(path);
  } catch (const locoh::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const locoh::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const locoh::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (has_max_degree) sc.max_degree = max_degree;
  if (has_seed) sc.seed = seed;

  locoh::RunOptions opts;
  opts.stable_output = stable_output;
  if (!cache_flag.empty()) {
    opts.cache_dir = cache_flag;
  } else if (const char* env = std::getenv("LOCOH_CACHE_DIR")) {
    opts.cache_dir = env;
  }

  locoh::Report report;
  try {
    report = locoh::run_scenario(sc, opts);
  } catch (const locoh::TaskError& e) {
    std::cerr << "task error: " << e.what() << "\n";
    return 4;
  } catch (const locoh::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const locoh::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  std::string rendered;
  if (format == "json")
    rendered = report.to_json_text();
  else if (format == "csv")
    rendered = report.to_csv();
  else
    rendered = report.to_text();

  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report to " << out_path << "\n";
      return 1;
    }
    out << rendered;
  }
  return 0;
}

int verify_command(const std::string& suite, locoh::u64 seed) {
  std::vector<std::string> names;
  if (suite == "all")
    names = locoh::verify_suite_names();
  else
    names.push_back(suite);

  bool all_ok = true;
  for (const auto& name : names) {
    locoh::SuiteResult res;
    try {
      res = locoh::run_verify_suite(name, seed);
    } catch (const locoh::Error& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
    if (res.ok) {
      std::cout << res.name << ": pass (" << res.checks << " checks)\n";
    } else {
      all_ok = false;
      std::cout << res.name << ": FAIL after " << res.checks << " checks\n";
      std::cout << "  witness: " << res.witness << "\n";
    }
  }
  return all_ok ? 0 : 1;
}

int bench_command(const std::string& profile) {
  std::vector<locoh::BenchRow> rows;
  try {
    rows = locoh::bench_profile(profile);
  } catch (const locoh::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::cout << locoh::format_bench_table(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group cohomology over prime fields: scenarios, verification, "
               "timing"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "evaluate a scenario file");
  std::string scenario_path, out_path, cache_flag;
  std::string format = "json";
  std::size_t max_degree = 0;
  locoh::u64 seed = 0;
  bool stable_output = false;
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_path, "write the report here instead of stdout");
  run->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  run->add_option("--cache-dir", cache_flag,
                  "result cache directory (default: LOCOH_CACHE_DIR)");
  auto* md_opt =
      run->add_option("--max-degree", max_degree, "override the degree cap");
  auto* seed_opt = run->add_option("--seed", seed, "override the seed");
  run->add_flag("--stable-output", stable_output,
                "zero the ms fields so reports are byte-identical");

  auto* verify = app.add_subcommand("verify", "run a property suite");
  std::string suite;
  locoh::u64 verify_seed = 1;
  verify->add_option("suite", suite, "suite name or \"all\"")->required();
  verify->add_option("--seed", verify_seed, "suite seed");

  auto* bench = app.add_subcommand("bench", "time a profile");
  std::string profile;
  bench->add_option("profile", profile, "small or stretch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed())
    return run_command(scenario_path, out_path, format, cache_flag,
                       md_opt->count() > 0, max_degree, seed_opt->count() > 0,
                       seed, stable_output);
  if (verify->parsed()) return verify_command(suite, verify_seed);
  if (bench->parsed()) return bench_command(profile);
  return 1;
}
