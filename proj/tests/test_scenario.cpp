#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "locoh/runner.hpp"

using namespace locoh;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string basic_text() {
  return "characteristic 2\n"
         "group s3 symmetric 3\n"
         "module v permutation s3\n"
         "task cohomology v max_degree 2\n";
}

// Fresh directory under the system temp root, removed by the caller.
std::filesystem::path scratch_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("locoh-test-") + tag + "-" +
              std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario parsing round-trips through its normal form") {
  auto sc = parse_scenario(basic_text());
  REQUIRE(sc.characteristic == 2);
  REQUIRE(sc.groups.size() == 1);
  REQUIRE(sc.groups[0].kind == "symmetric");
  REQUIRE(sc.modules.size() == 1);
  REQUIRE(sc.tasks.size() == 1);
  REQUIRE(sc.tasks[0].has_max_degree);
  REQUIRE(sc.tasks[0].max_degree == 2);

  const auto canon = sc.canonical_text();
  auto again = parse_scenario(canon);
  REQUIRE(again.canonical_text() == canon);

  SECTION("comments and spacing do not affect the normal form") {
    const std::string noisy =
        "# a comment line\n"
        "characteristic   2   # trailing comment\n"
        "\n"
        "group    s3   symmetric    3\n"
        "module v permutation s3\n"
        "\t task cohomology v max_degree 2\n";
    REQUIRE(parse_scenario(noisy).canonical_text() == canon);
  }

  SECTION("settings and definition forms reserialize") {
    const std::string full =
        "characteristic 3\n"
        "seed 41\n"
        "max_degree 2\n"
        "order_cap 50\n"
        "group c3 generators (0 1 2) degree 3\n"
        "group klein generators (0 1) ; (2 3)\n"
        "module t trivial c3 2\n"
        "module m matrices klein 1 1 | 1\n"
        "chain ch klein klein\n"
        "task les c3 split\n"
        "task survival ch t degree 1\n";
    auto full_sc = parse_scenario(full);
    REQUIRE(full_sc.seed == 41);
    REQUIRE(full_sc.order_cap == 50);
    REQUIRE(full_sc.groups[0].degree == 3);
    REQUIRE(full_sc.groups[1].generator_texts ==
            std::vector<std::string>{"(0 1)", "(2 3)"});
    REQUIRE(full_sc.modules[0].dim == 2);
    REQUIRE(full_sc.modules[1].entries.size() == 2);
    REQUIRE(full_sc.tasks[0].split);
    REQUIRE(full_sc.tasks[1].has_degree);
    const auto full_canon = full_sc.canonical_text();
    REQUIRE(parse_scenario(full_canon).canonical_text() == full_canon);
  }
}

TEST_CASE("parse errors carry line and column positions") {
  SECTION("unknown directive") {
    try {
      parse_scenario("characteristic 2\nbanana s3\n");
      FAIL("no error");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 2);
      REQUIRE(e.column == 1);
      REQUIRE_THAT(e.what(), ContainsSubstring("line 2, column 1"));
      REQUIRE_THAT(e.what(), ContainsSubstring("banana"));
    }
  }
  SECTION("bad number reports the offending token") {
    try {
      parse_scenario("characteristic 2\ngroup g symmetric three\n");
      FAIL("no error");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 2);
      REQUIRE(e.column == 19);
      REQUIRE_THAT(e.what(), ContainsSubstring("three"));
    }
  }
  SECTION("missing argument points past the line end") {
    REQUIRE_THROWS_MATCHES(parse_scenario("characteristic 2\ngroup g\n"),
                           ParseError, Catch::Matchers::MessageMatches(
                                           ContainsSubstring("group kind")));
  }
  SECTION("duplicate names share one namespace") {
    REQUIRE_THROWS_MATCHES(
        parse_scenario("characteristic 2\ngroup g symmetric 3\n"
                       "module g permutation g\n"),
        ParseError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("duplicate definition of \"g\"")));
  }
  SECTION("matrices blocks must be square") {
    REQUIRE_THROWS_MATCHES(
        parse_scenario("characteristic 2\ngroup c2 cyclic 2\n"
                       "module m matrices c2 2 1 0 0\n"),
        ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("4 entries")));
  }
  SECTION("characteristic is mandatory and must be prime") {
    REQUIRE_THROWS_AS(parse_scenario("group g cyclic 2\n"), ValidationError);
    REQUIRE_THROWS_MATCHES(
        parse_scenario("characteristic 4\n"), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("characteristic")));
    REQUIRE_THROWS_MATCHES(
        parse_scenario("characteristic 2\ncharacteristic 3\n"), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("twice")));
  }
  SECTION("trailing tokens are rejected") {
    REQUIRE_THROWS_AS(
        parse_scenario("characteristic 2\ngroup g cyclic 2 extra\n"),
        ParseError);
  }
}

TEST_CASE("name resolution and task validation happen before execution") {
  SECTION("undefined names are validation errors with the defining line") {
    auto sc = parse_scenario("characteristic 2\ngroup g symmetric 3\n"
                             "module v permutation missing\n");
    REQUIRE_THROWS_MATCHES(
        ScenarioContext(sc), ValidationError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("line 3: undefined group name \"missing\"")));
  }
  SECTION("a bad later task stops the whole run") {
    auto sc = parse_scenario("characteristic 2\ngroup g symmetric 3\n"
                             "module v permutation g\n"
                             "task cohomology v\n"
                             "task cohomology nope\n");
    REQUIRE_THROWS_MATCHES(run_scenario(sc), ValidationError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("undefined module name")));
  }
  SECTION("options are tied to their task kinds") {
    auto check = [](const std::string& task_line, const char* needle) {
      auto sc = parse_scenario("characteristic 2\ngroup g symmetric 3\n"
                               "module v permutation g\n" +
                               task_line + "\n");
      ScenarioContext ctx(sc);
      REQUIRE_THROWS_MATCHES(
          validate_task(ctx, sc.tasks[0]), ValidationError,
          Catch::Matchers::MessageMatches(ContainsSubstring(needle)));
    };
    check("task cohomology v split", "split");
    check("task cohomology v count 3", "count");
    check("task cohomology v degree 1", "degree");
    check("task complete_reducibility v max_degree 1", "max_degree");
    check("task cohomology v max_degree 9", "exceeds the scenario cap");
    check("task frobnicate v", "unknown task kind");
    check("task cohomology v w", "1 name argument(s)");
  }
  SECTION("group construction failures carry the group name") {
    auto sc = parse_scenario("characteristic 2\norder_cap 3\n"
                             "group g symmetric 4\n");
    REQUIRE_THROWS_MATCHES(
        ScenarioContext(sc), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("group \"g\"")));
  }
}

TEST_CASE("the three-point scenario reports cohomology dims 1,1,1") {
  auto report = run_scenario(parse_scenario(basic_text()));
  REQUIRE(report.tasks.size() == 1);
  REQUIRE(report.tasks[0]["kind"] == "cohomology");
  REQUIRE(report.tasks[0]["result"]["dims"] ==
          json(std::vector<std::size_t>{1, 1, 1}));
  REQUIRE(report.version == kVersion);
  REQUIRE(report.hash.size() == 16);
}

TEST_CASE("task kinds produce their documented result shapes") {
  const std::string text =
      "characteristic 2\n"
      "seed 5\n"
      "group s3 symmetric 3\n"
      "group s2 generators (0 1) degree 3\n"
      "module v permutation s3\n"
      "module k trivial s3\n"
      "module w dual v\n"
      "chain ch s3 s2 s3\n"
      "task ext v k max_degree 2\n"
      "task tor v k max_degree 2\n"
      "task duality_certificate v k max_degree 2\n"
      "task les s3 max_degree 2\n"
      "task les s3 split max_degree 1\n"
      "task localize_splice_roundtrip ch v count 5\n"
      "task survival ch v degree 1\n"
      "task hypothesis_checks ch k v\n"
      "task complete_reducibility v\n"
      "task homology w max_degree 2\n";
  auto report = run_scenario(parse_scenario(text));
  REQUIRE(report.tasks.size() == 10);

  const auto& ext = report.tasks[0];
  const auto& tor = report.tasks[1];
  // hom(v, k) is the dual module, so ext dims match its cohomology and the
  // tensor with the trivial line leaves homology of v itself.
  REQUIRE(ext["result"]["dims"] == json(std::vector<std::size_t>{1, 1, 1}));
  REQUIRE(tor["result"]["dims"] == json(std::vector<std::size_t>{1, 1, 1}));
  REQUIRE(ext["result"]["dims"] == report.tasks[9]["result"]["dims"]);

  const auto& cert = report.tasks[2];
  REQUIRE(cert["result"]["nonsingular"] ==
          json(std::vector<bool>{true, true, true}));
  REQUIRE(cert["result"]["dims"] == tor["result"]["dims"]);

  const auto& les = report.tasks[3];
  REQUIRE(les["result"]["exact"] == true);
  REQUIRE(les["result"]["dims_middle"] ==
          json(std::vector<std::size_t>{1, 1, 1}));
  const auto& split_les = report.tasks[4];
  REQUIRE(split_les["result"]["exact"] == true);
  REQUIRE(split_les["result"]["connecting_ranks"] ==
          json(std::vector<std::size_t>{0, 0}));

  REQUIRE(report.tasks[5]["result"]["ok"] == true);
  REQUIRE(report.tasks[5]["result"]["trials_per_degree"] == 5);

  const auto& survival = report.tasks[6];
  REQUIRE(survival["result"]["level_dims"].size() == 2);
  REQUIRE(survival["result"]["weakly_decreasing"] == true);

  const auto& hyp = report.tasks[7];
  REQUIRE(hyp["result"].contains("radical_fills"));
  REQUIRE(hyp["result"].contains("trivial_h1"));

  // Three points over GF(2) split as the fixed line plus the two-dimensional
  // simple; over GF(3) the fixed line slips inside the kernel of the sum.
  REQUIRE(report.tasks[8]["result"]["completely_reducible"] == true);
  auto gf3 = run_scenario(
      parse_scenario("characteristic 3\ngroup s3 symmetric 3\n"
                     "module v permutation s3\n"
                     "task complete_reducibility v\n"));
  REQUIRE(gf3.tasks[0]["result"]["completely_reducible"] == false);
}

TEST_CASE("matrix modules defined inline match their builtin counterparts") {
  const std::string text =
      "characteristic 2\n"
      "group c2 generators (0 1)\n"
      "module swap matrices c2 2 0 1 1 0\n"
      "module v permutation c2\n"
      "task cohomology swap max_degree 2\n"
      "task cohomology v max_degree 2\n";
  auto report = run_scenario(parse_scenario(text));
  REQUIRE(report.tasks[0]["result"] == report.tasks[1]["result"]);

  SECTION("entries must be reduced modulo the characteristic") {
    auto sc = parse_scenario("characteristic 2\ngroup c2 cyclic 2\n"
                             "module m matrices c2 1 2\n");
    REQUIRE_THROWS_MATCHES(ScenarioContext(sc), ValidationError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("not reduced modulo 2")));
  }
}

TEST_CASE("reports are deterministic and cache results across runs") {
  auto sc = parse_scenario(basic_text());
  RunOptions opts;
  opts.stable_output = true;

  SECTION("stable output is byte-identical") {
    auto a = run_scenario(sc, opts).to_json_text();
    auto b = run_scenario(sc, opts).to_json_text();
    REQUIRE(a == b);
    REQUIRE_THAT(a, ContainsSubstring("\"ms\": 0"));
  }

  SECTION("the hash tracks the normal form, not the layout") {
    auto noisy = parse_scenario("# noise\ncharacteristic 2\n\n"
                                "group   s3   symmetric 3\n"
                                "module v permutation s3\n"
                                "task cohomology v max_degree 2\n");
    REQUIRE(run_scenario(noisy, opts).hash == run_scenario(sc, opts).hash);
    auto reseeded = sc;
    reseeded.seed = 99;
    REQUIRE(run_scenario(reseeded, opts).hash != run_scenario(sc, opts).hash);
  }

  SECTION("cached task results are reused verbatim") {
    auto dir = scratch_dir("cache");
    opts.cache_dir = dir.string();
    auto first = run_scenario(sc, opts);
    std::size_t entries = 0;
    std::filesystem::path entry_path;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      ++entries;
      entry_path = e.path();
    }
    REQUIRE(entries == 1);

    json poisoned;
    {
      std::ifstream in(entry_path);
      json stored;
      in >> stored;
      REQUIRE(stored["result"] == first.tasks[0]["result"]);
      poisoned = stored;
    }
    poisoned["result"]["dims"] = std::vector<std::size_t>{7, 7, 7};
    {
      std::ofstream out(entry_path);
      out << poisoned.dump();
    }
    auto second = run_scenario(sc, opts);
    REQUIRE(second.tasks[0]["result"]["dims"] ==
            json(std::vector<std::size_t>{7, 7, 7}));

    // A corrupt entry falls back to recomputation and is rewritten.
    {
      std::ofstream out(entry_path);
      out << "not json";
    }
    auto third = run_scenario(sc, opts);
    REQUIRE(third.tasks[0]["result"] == first.tasks[0]["result"]);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("report rendering keeps the schema stable") {
  auto report = run_scenario(parse_scenario(basic_text()),
                             RunOptions{"", true});
  auto doc = json::parse(report.to_json_text());
  REQUIRE(doc.size() == 3);
  auto it = doc.begin();
  REQUIRE(it.key() == "hash");
  REQUIRE((++it).key() == "version");
  REQUIRE((++it).key() == "tasks");
  const auto& task = doc["tasks"][0];
  std::vector<std::string> keys;
  for (auto kit = task.begin(); kit != task.end(); ++kit)
    keys.push_back(kit.key());
  REQUIRE(keys == std::vector<std::string>{"id", "kind", "inputs", "result",
                                           "ms"});

  SECTION("csv quotes nested json and doubles embedded quotes") {
    auto csv = report.to_csv();
    REQUIRE_THAT(csv, ContainsSubstring("id,kind,inputs,result,ms"));
    REQUIRE_THAT(csv, ContainsSubstring("\"{\"\"module\"\":\"\"v\"\""));
    REQUIRE_THAT(csv, ContainsSubstring("0,cohomology,"));
  }

  SECTION("text rendering names the report hash") {
    REQUIRE_THAT(report.to_text(), ContainsSubstring(report.hash));
  }

  SECTION("an empty scenario yields an empty task array") {
    auto empty = run_scenario(parse_scenario("characteristic 2\n"));
    REQUIRE(empty.tasks.empty());
    auto parsed = json::parse(empty.to_json_text());
    REQUIRE(parsed["tasks"].is_array());
    REQUIRE(parsed["tasks"].empty());
  }
}

TEST_CASE("task failures name the failing task") {
  auto sc = parse_scenario("characteristic 2\nmax_degree 2\n"
                           "group s5 symmetric 5\n"
                           "module v permutation s5\n"
                           "task cohomology v max_degree 1\n"
                           "task cohomology v max_degree 2\n");
  try {
    run_scenario(sc);
    FAIL("no error");
  } catch (const TaskError& e) {
    REQUIRE(e.index == 1);
    REQUIRE_THAT(e.what(), ContainsSubstring("task 1 (cohomology)"));
    REQUIRE_THAT(e.what(), ContainsSubstring("exceeds the budget"));
  }
}
