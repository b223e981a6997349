#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "intricacy/errors.hpp"
#include "intricacy/harness/config.hpp"
#include "intricacy/harness/output.hpp"
#include "intricacy/harness/runners.hpp"

using namespace intricacy;
using namespace intricacy::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("intricacy_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& sub, const ExperimentConfig& cfg, const fs::path& out, std::string* errors = nullptr,
        bool plot = false) {
  std::ostringstream log, err;
  const int code = run_subcommand(sub, {cfg, out, plot}, log, err);
  if (errors) *errors = err.str();
  return code;
}

}  // namespace

TEST_CASE("defaults parse from an empty file") {
  const auto cfg = parse_config("# nothing here\n\n");
  CHECK(cfg.kmc.gas.n_particles == 100000);
  CHECK(cfg.kmc.gas.seed == 12345);
  CHECK(cfg.pde.dx == 0.1);
  CHECK(cfg.pde.resolved_dt() == doctest::Approx(0.015));
  CHECK(cfg.front.C == 0.05);
  CHECK(cfg.census.n_e == 2.7e25);
}

TEST_CASE("values, lists and comments") {
  const auto cfg = parse_config(R"(
[pde]
dx = 0.05      ; finer grid
free.dx = 0.4, 0.2
constraint.enabled = false
[indexed]
initial_string = 0,1
[front]
x0 = auto
C = 0.02
[kmc]
seed = 42
)");
  CHECK(cfg.pde.dx == 0.05);
  CHECK(cfg.pde.free_dx == std::vector<double>{0.4, 0.2});
  CHECK_FALSE(cfg.pde.constraint_enabled);
  CHECK(cfg.indexed.lattice.initial_string == std::vector<int>{0, 1});
  CHECK_FALSE(cfg.front.x0);
  CHECK(cfg.front.C == 0.02);
  CHECK(cfg.kmc.gas.seed == 42);
}

TEST_CASE("unknown keys, sections and duplicates are rejected") {
  CHECK_THROWS_AS(parse_config("[pde]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[pde]\ndx = 0.1\ndx = 0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dx = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[pde]\ndx = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[pde]\ndx\n"), ConfigError);
  try {
    parse_config("[pde]\n\nbogus = 1\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/intricacy.ini"), ConfigError);
}

TEST_CASE("echo round-trips through the parser") {
  auto cfg = parse_config("[pde]\ndx = 0.05\n[kmc]\nseed = 9\n");
  std::string text, section;
  for (const auto& [key, value] : cfg.echo()) {
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      text += "[" + section + "]\n";
    }
    text += key.substr(dot + 1) + " = " + value + "\n";
  }
  const auto again = parse_config(text);
  CHECK(again.echo() == cfg.echo());
}

TEST_CASE("numbers format as shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-12) == "1e-12");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV output is deterministic and quotes text cells") {
  const auto dir = scratch("csv");
  for (const char* name : {"a.csv", "b.csv"}) {
    CsvWriter csv(dir / name, {"x", "y"});
    csv.row({0.1, 1.0 / 3.0});
    csv.row_text({"a,b", "say \"hi\""});
  }
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv") == "x,y\n0.1,0.3333333333333333\n\"a,b\",\"say \"\"hi\"\"\"\n");
  CsvWriter bad(dir / "c.csv", {"x", "y"});
  CHECK_THROWS(bad.row({1.0}));
}

TEST_CASE("SVG plots") {
  PlotSpec empty{"t", "x", "y", {}};
  CHECK_THROWS_AS(render_svg(empty), std::invalid_argument);
  PlotSpec one{"t", "x", "y", {{"a", {1.0}, {2.0}}}};
  CHECK_THROWS_AS(render_svg(one), std::invalid_argument);
  PlotSpec line{"line", "x", "y", {{"a", {0.0, 1.0}, {0.0, 1.0}}}};
  const auto svg = render_svg(line);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg == render_svg(line));
}

TEST_CASE("front subcommand writes profile, summary and manifest") {
  const auto dir = scratch("front");
  CHECK(run("front", {}, dir, nullptr, true) == kExitOk);
  CHECK(fs::exists(dir / "front_profile.csv"));
  CHECK(fs::exists(dir / "front_profile.svg"));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["subcommand"] == "front");
  CHECK(m["exit_code"] == 0);
  CHECK(m["metrics"]["q"].get<double>() == doctest::Approx(1.2679491924311228));
  CHECK(m["metrics"]["g_prime_at_front"].get<double>() == doctest::Approx(-0.06).epsilon(0.5));
  CHECK(m["corrections"].contains("f0_equation_uses_laplacian_of_f0"));

  const auto first = slurp(dir / "front_profile.csv");
  CHECK(run("front", {}, dir) == kExitOk);
  CHECK(slurp(dir / "front_profile.csv") == first);
}

TEST_CASE("census subcommand") {
  const auto dir = scratch("census");
  CHECK(run("census", {}, dir) == kExitOk);
  const auto csv = slurp(dir / "census.csv");
  CHECK(csv.find("active_waves") != std::string::npos);
}

TEST_CASE("pde rejects an unstable step with the bound in the message") {
  auto cfg = parse_config("[pde]\ndt = 0.05\n");
  const auto dir = scratch("pde_dt");
  std::string err;
  CHECK(run("pde", cfg, dir, &err) == kExitConfig);
  CHECK(err.find("3 dx^2") != std::string::npos);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("pde output is byte-identical across runs") {
  auto cfg = parse_config("[pde]\nt_end = 10\nz_max = 40\nsource.z = 20\nfree.enabled = false\n");
  const auto a = scratch("pde_a"), b = scratch("pde_b");
  REQUIRE(run("pde", cfg, a) == kExitOk);
  REQUIRE(run("pde", cfg, b) == kExitOk);
  CHECK(slurp(a / "pde_history.csv") == slurp(b / "pde_history.csv"));
  CHECK(slurp(a / "pde_front.csv") == slurp(b / "pde_front.csv"));
}

TEST_CASE("unknown subcommand is a configuration error") {
  CHECK(run("dance", {}, scratch("dance")) == kExitConfig);
}

TEST_CASE("small kmc run is reproducible for a seed") {
  auto cfg = parse_config(
      "[kmc]\nn_particles = 4000\nbox_x = 8\nbox_y = 8\nbox_z = 15\nsource.plane_z = 7.5\n"
      "t_end = 4\nfit_start = 1\n");
  const auto a = scratch("kmc_a"), b = scratch("kmc_b");
  REQUIRE(run("kmc", cfg, a) == kExitOk);
  REQUIRE(run("kmc", cfg, b) == kExitOk);
  CHECK(slurp(a / "kmc_profile.csv") == slurp(b / "kmc_profile.csv"));
  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(m["seed"] == 12345);
  CHECK(m["metrics"]["tags_monotone"] == 1.0);
}
