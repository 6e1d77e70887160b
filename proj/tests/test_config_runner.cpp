#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "lrlab/errors.hpp"
#include "lrlab/runner.hpp"
#include "oracles.hpp"

using namespace lrlab;
namespace fs = std::filesystem;

namespace {

const char* kLightcone = R"({
  // small light-cone run
  "experiment": "lightcone",
  "seed": 7,
  "model": {"name": "tfim", "J": 1.0, "h": 1.0, "lattice": {"type": "chain", "n": 6}},
  "grid": {"L": [1, 2, 3, 4, 5], "t": {"start": 0.0, "stop": 1.0, "step": 0.25}},
  "observables": {"A": "Z", "B": "Z"}
})";

bool has_issue(const ConfigError& e, const std::string& path) {
  for (const auto& i : e.issues())
    if (i.path == path) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lrlab-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(kLightcone);
  CHECK(cfg.experiment == "lightcone");
  CHECK(cfg.seed == 7);
  CHECK(cfg.model.lattice.n == 6);
  CHECK(cfg.grid.t.size() == 5);
  CHECK(cfg.grid.t.back() == doctest::Approx(1.0));
  CHECK(cfg.params.at("path") == "auto");
  CHECK(cfg.plan.dt == 0.01);

  try {
    parse_config(R"({"seed": 1})");
    FAIL("missing experiment accepted");
  } catch (const ConfigError& e) {
    CHECK(has_issue(e, "/experiment"));
  }
  try {
    parse_config(R"({"experiment": "lightcone", "plan": {"dt": -0.1},
                     "grid": {"L": [1], "t": [0.5]}, "colour": 3})");
    FAIL("bad config accepted");
  } catch (const ConfigError& e) {
    CHECK(has_issue(e, "/plan/dt"));
    CHECK(has_issue(e, "/colour"));
  }
  try {
    parse_config("{\n  \"experiment\": \"lightcone\",\n  oops\n}");
    FAIL("syntax error accepted");
  } catch (const ConfigError& e) {
    CHECK(e.issues().at(0).line == 3);
  }
  CHECK_THROWS_AS(parse_config(R"({"experiment": "warp"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "lightcone", "grid": {"L": [3, 2], "t": [1.0]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "tqo", "model": {"name": "tfim"}, "params": {"pair": "toric"}})"),
                  ConfigError);
}

TEST_CASE("result table CSV round trip") {
  ResultTable t("demo", {"L", "t"});
  t.add("C", {3.0, 0.1}, 1.0 / 3.0, 1e-17);
  t.add("C", {4.0, std::nan("")}, -2.5e-300);
  t.add("fit", {std::nan(""), std::nan("")}, std::numeric_limits<double>::infinity());
  const std::string csv = t.to_csv();
  CHECK(csv.rfind("# lrlab-csv v1\n", 0) == 0);
  CHECK(csv.find("experiment,quantity,L,t,value,error\n") != std::string::npos);
  const ResultTable back = ResultTable::from_csv(csv);
  REQUIRE(back.rows().size() == 3);
  CHECK(back.rows()[0].value == 1.0 / 3.0);
  CHECK(back.rows()[0].error == 1e-17);
  CHECK(back.rows()[1].value == -2.5e-300);
  CHECK(std::isnan(back.rows()[1].params[1]));
  CHECK(std::isinf(back.rows()[2].value));
  CHECK(back.to_csv() == csv);
  CHECK(back.param_index("t") == 1);
  CHECK_THROWS(ResultTable::from_csv("experiment,quantity,value,error\n"));
}

TEST_CASE("plots derive from the CSV alone") {
  ResultTable t("demo", {"L", "t"});
  for (int L = 1; L <= 3; ++L)
    for (int k = 0; k < 4; ++k) t.add("C", {double(L), 0.5 * k}, std::exp(-L + k));
  PlotSpec spec;
  spec.title = "demo";
  spec.x_param = "t";
  spec.series_param = "L";
  spec.quantities = {"C"};
  spec.log_y = true;
  const std::string svg = render_svg(t, spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg == render_svg(ResultTable::from_csv(t.to_csv()), spec));
}

TEST_CASE("run writes csv, svg and manifest") {
  RunConfig cfg = parse_config(kLightcone);
  const fs::path dir = scratch("run");
  RunOverrides o;
  o.output_dir = dir.string();
  const RunResult r = run(cfg, o);
  CHECK(fs::exists(r.csv));
  CHECK(fs::exists(r.svg));
  CHECK(fs::exists(r.manifest));
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++files;
  }
  CHECK(files == 3);
  const std::string csv = slurp(r.csv);
  CHECK(r.csv_sha256 == sha256_hex(csv));
  const auto manifest = nlohmann::json::parse(slurp(r.manifest));
  CHECK(manifest.at("experiment") == "lightcone");
  CHECK(manifest.at("seed") == 7);

  o.threads = 3;
  const RunResult again = run(cfg, o);
  CHECK(again.csv_sha256 == r.csv_sha256);
  CHECK(slurp(again.csv) == csv);
  fs::remove_all(dir);
}

TEST_CASE("oversized requests fail before any file is written") {
  RunConfig cfg = parse_config(R"({"experiment": "lightcone",
    "model": {"name": "tfim", "lattice": {"type": "chain", "n": 30}},
    "grid": {"L": [1, 2], "t": [0.5]}})");
  const fs::path dir = scratch("cap");
  RunOverrides o;
  o.output_dir = dir.string();
  CHECK_THROWS_AS(run(cfg, o), CapabilityError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("environment overrides") {
  ::setenv("LRLAB_THREADS", "4", 1);
  ::setenv("LRLAB_OUTPUT_DIR", "/tmp/elsewhere", 1);
  const RunOverrides o = overrides_from_env();
  CHECK(o.threads == 4);
  CHECK(o.output_dir == "/tmp/elsewhere");
  ::setenv("LRLAB_THREADS", "many", 1);
  CHECK_THROWS_AS(overrides_from_env(), DomainError);
  ::unsetenv("LRLAB_THREADS");
  ::unsetenv("LRLAB_OUTPUT_DIR");
}

TEST_CASE("calculator") {
  CHECK(calc("cstar", {}).value == doctest::Approx(oracle::cstar_grid(100000).first).epsilon(1e-6));
  CHECK(calc("capacity_bound", {"ε=1", "nB=3", "m=2"}).value == doctest::Approx(6.0));
  CHECK(calc("optimal_cut", {"χ=1", "ξ=1", "v=1", "t=0", "L=3"}).value == doctest::Approx(1.0));
  CHECK(calc("fannes_bound", {"delta=0.25", "nB=2", "m=2"}).value == doctest::Approx(1.0));
  CHECK_THROWS(calc("nonsense", {}));
  CHECK_THROWS(calc("capacity_bound", {"ε=1"}));
  CHECK(calc_formulas().size() >= 8);
}
