#include <cmath>
#include <cstdlib>
#include <fstream>

#include "commands.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "property.hpp"

using namespace levygen;
using namespace levygen::cli;

namespace {

CommandResult run(const std::string& cmd, const std::string& text, RunOptions opt = {}) {
  return run_command(cmd, json::parse(text), opt);
}

std::string error_of(const std::string& cmd, const std::string& text) {
  try {
    run(cmd, text);
  } catch (const ConfigError& e) {
    CHECK(exit_code_for(e) == 2);
    return e.what();
  }
  FAIL("expected a config error");
  return "";
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

const char* kIncrements = R"({"model": {"kind": "stable", "alpha": 1.3}, "mode": "increments", "t": 0.1, "n": 10000})";

}  // namespace

TEST_CASE("symbol command values") {
  auto sl = run("symbol", R"({"symbol": {"family": "stable_like", "gamma": 0.7}, "sector": false})");
  CHECK(sl.summary["beta_infinity"]["value"].get<double>() == doctest::Approx(0.7).epsilon(0.02));
  CHECK(sl.pass);

  auto rel = run("symbol", R"({"symbol": {"family": "relativistic", "m": 1, "gamma": 1}, "xi": [[1.7320508075688772]],
                               "beta_infinity": false, "sector": false})");
  CHECK(rel.summary["values"][0]["re"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rel.summary["values"][0]["im"].get<double>() == 0.0);

  auto rays = run("symbol", R"({"symbol": {"family": "stable_like", "gamma": 1.0}, "beta_infinity": false, "sector": false,
                                "rays": {"r_min": 1, "r_max": 4, "points": 3}})");
  REQUIRE(rays.files.size() == 1);
  CHECK(rays.files[0].text == "ray,eta1,r,re,im\n0,1,1,1,0\n0,1,2,2,0\n0,1,4,4,0\n");
}

TEST_CASE("schema errors name the offending key") {
  CHECK(contains(error_of("symbol", R"({"symbol": {"family": "stable_like", "gamma": 0.7, "colour": 1}})"), "$.symbol.colour"));
  CHECK(contains(error_of("symbol", R"({"symbol": {"family": "stable_like"}})"), "$.symbol.gamma"));
  CHECK(contains(error_of("symbol", R"({"symbol": {"family": "cubic"}})"), "$.symbol.family"));
  CHECK(contains(error_of("asymptotics", R"({"experiment": "limit", "model": {"kind": "compound_poisson",
                 "atoms": [{"at": [1], "weight": "two"}]}, "function": "gaussian"})"),
                 "$.model.atoms[0].weight"));
  CHECK(contains(error_of("symbol", R"({"symbol": {"family": "stable_like", "gamma": "0.5+sin("}})"), "$.symbol.gamma"));
  CHECK(contains(error_of("verify", R"({"command": "symbol", "suite": "kernel"})"), "$.command"));
  CHECK(contains(error_of("simulate", R"({"model": {"kind": "stable", "alpha": 1}, "T": 1, "h": 0.1, "seed": "banana"})"),
                 "$.seed"));
}

TEST_CASE("malformed JSON is a config error") {
  const std::string path = "levygen_cli_malformed.json";
  {
    std::ofstream out(path);
    out << "{\"symbol\": {\"family\": \"stable_like\",\n";
  }
  try {
    load(path);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "malformed JSON"));
    CHECK(contains(e.what(), "line 2"));
    CHECK(exit_code_for(e) == 2);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load("no_such_levygen_config.json"), ConfigError);
}

TEST_CASE("exit codes by error class") {
  CHECK(exit_code_for(ContractError("x")) == 2);
  CHECK(exit_code_for(DomainError("x")) == 2);
  CHECK(exit_code_for(NonConvergence("x", 0.0, 1.0)) == 3);
  CHECK(exit_code_for(InsufficientRegularity("x")) == 3);
}

TEST_CASE("seed defaults and overrides") {
  auto def = run("simulate", kIncrements);
  CHECK(def.summary["seed"] == "0x4C455659");
  RunOptions explicit_seed;
  explicit_seed.seed = 0x4C455659;
  CHECK(run("simulate", kIncrements, explicit_seed).files[0].text == def.files[0].text);

  auto in_config = run("simulate", R"({"model": {"kind": "stable", "alpha": 1.3}, "mode": "increments", "t": 0.1, "n": 10000,
                                       "seed": "0x4C455659"})");
  CHECK(in_config.files[0].text == def.files[0].text);

  RunOptions other;
  other.seed = 17;
  auto o = run("simulate", kIncrements, other);
  CHECK(o.summary["seed"] == "0x11");
  CHECK(o.files[0].text != def.files[0].text);
  CHECK(parse_seed("0x11", "s") == 17);
  CHECK(parse_seed("17", "s") == 17);
}

TEST_CASE("verify suites") {
  auto app7 = run("verify", R"({"suite": "app7", "symbol": {"family": "stable_like", "gamma": 1.5}})");
  CHECK(app7.pass);
  CHECK(app7.summary["diffusion"].get<double>() <= 0.01);

  auto bm = run("verify", R"({"suite": "app7", "symbol": {"family": "levy", "Q": [[2]], "nu": {"kind": "zero"}}})");
  CHECK(bm.summary["applicable"] == false);

  auto dom = run("verify", R"j({"suite": "domain", "symbol": {"family": "stable_like", "gamma": "0.6+0.2*sin(x)"},
                               "function": "gaussian", "order": {"sine": {"base": 0.75, "amp": 0.2}, "eps": 0.1},
                               "grid": {"lo": [-8], "hi": [8], "n": 17}})j");
  CHECK(dom.summary["status"] == "certified-cor-app-11");
  CHECK(dom.pass);

  auto wrong = run("verify", R"({"suite": "domain", "symbol": {"family": "stable_like", "gamma": 0.5},
                                 "function": {"name": "holder_gaussian", "beta": 0.8}, "order": 0.8,
                                 "grid": {"lo": [-2], "hi": [2], "n": 5}, "expected": "certified-cor-app-13"})");
  CHECK(wrong.summary["status"] == "certified-thm-app-3");
  CHECK_FALSE(wrong.pass);

  auto kernel = run("verify", R"({"suite": "kernel", "y": [0.5], "alpha": [0.7, 1.5]})");
  CHECK(kernel.summary["checks"].size() == 2);
  CHECK(kernel.pass);
}

TEST_CASE("generator eigen reference") {
  auto g = run("generator", R"({"operator": "fractional_laplacian", "alpha": 1.0, "function": {"name": "cos", "xi0": [2]},
                                "grid": [[0], [0.4]], "reference": "eigen"})");
  CHECK(g.pass);
  CHECK(g.summary["worst_rel_err"].get<double>() < 1e-6);

  auto s = run("generator", R"({"symbol": {"family": "stable_like", "gamma": 1.0}, "order": 1.0,
                                "function": {"name": "cos", "xi0": [2]}, "grid": [[0]], "reference": "expected",
                                "expected": [-1.0]})");
  CHECK_FALSE(s.pass);
}

TEST_CASE("asymptotics on a drift model is exact") {
  auto r = run("asymptotics", R"({"experiment": "limit", "model": {"kind": "levy", "b": [1], "nu": {"kind": "zero"}},
                                  "function": "sin", "N": 1000, "extrapolation": "richardson"})");
  CHECK(r.pass);
  CHECK(r.summary["discrepancy"].get<double>() < 1e-6);
  CHECK(r.summary["limit_std_error"].get<double>() == 0.0);
  const auto& csv = r.files[0].text;
  CHECK(csv.rfind("t,mean,stderr,reference,discrepancy\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("unbounded functions need a stopping radius from the config") {
  const char* base = R"({"experiment": "limit", "function": "quadratic", "N": 1000,
      "model": {"kind": "levy", "nu": {"kind": "power", "alpha": 1.5, "intensity": "c_alpha", "truncation": 1}})";
  try {
    run("asymptotics", std::string(base) + "}");
    FAIL("expected a contract error");
  } catch (const ContractError& e) {
    CHECK(exit_code_for(e) == 2);
  }
  CHECK_NOTHROW(run("asymptotics", std::string(base) + R"(, "stop_radius": 10, "t_grid": [0.1, 0.01]})"));
}

TEST_CASE("tensor grids list the last axis fastest") {
  auto g = grid(json::parse(R"({"lo": [0, 10], "hi": [1, 12], "n": [2, 3]})"), "$");
  REQUIRE(g.size() == 6);
  CHECK(g[0] == Vector(Eigen::Vector2d(0, 10)));
  CHECK(g[1] == Vector(Eigen::Vector2d(0, 11)));
  CHECK(g[3] == Vector(Eigen::Vector2d(1, 10)));
  CHECK(t_grid(json::parse(R"({"t_max": 0.1, "t_min": 0.001, "points": 3})"), "$").size() == 3);
}

TEST_CASE("csv quoting") {
  Csv c({"a", "b"});
  c.cell("x,y").cell("say \"hi\"").end();
  CHECK(c.text() == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(-INFINITY) == "-inf");
}

TEST_CASE("property: numbers survive the CSV round trip") {
  PROPERTY_CASES(200, 1201u, [](prop::Gen& g, int) {
    const double v = g.uniform(-1, 1) * std::pow(10.0, g.integer(-300, 300));
    CHECK(std::strtod(fmt(v).c_str(), nullptr) == v);
  });
}

TEST_CASE("property: any unknown key is rejected with its path") {
  PROPERTY_CASES(20, 1301u, [](prop::Gen& g, int) {
    json cfg = json::parse(R"({"model": {"kind": "stable", "alpha": 1.1}, "mode": "increments", "t": 0.1, "n": 10})");
    std::string key = "k" + std::to_string(g.integer(0, 1000000));
    const bool nested = g.coin();
    (nested ? cfg["model"] : cfg)[key] = g.uniform(0, 1);
    try {
      run_command("simulate", cfg, {});
      FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
      CHECK(contains(e.what(), (nested ? "$.model." : "$.") + key));
    }
  });
}

TEST_CASE("property: CSV output does not depend on the worker count") {
  PROPERTY_CASES(4, 1401u, [](prop::Gen& g, int) {
    RunOptions a, b;
    a.seed = b.seed = static_cast<std::uint64_t>(g.integer(1, 1 << 30));
    b.workers = g.integer(2, 4);
    CHECK(run("simulate", kIncrements, a).files[0].text == run("simulate", kIncrements, b).files[0].text);
  });
}
