#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbell/errors.hpp"
#include "qbell/runner.hpp"

using namespace qbell;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "name": "unit",
    "task": "qubit-dynamics",
    "params": {"delta": 0.15, "epsilon": 0.01, "omega": 1.0, "lambda": 0.15, "alpha": 2.0},
    "branch": "+",
    "method": "both",
    "time": {"start": 0, "stop": 20, "step": 5},
    "output": {"path": "unit", "format": "csv"}
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qbell_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(QBELL_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto s = parse_scenario(base_config());
  CHECK(s.task == Task::qubit_dynamics);
  CHECK(s.method == MethodChoice::both);
  CHECK(s.time->samples().size() == 5);
  CHECK(s.params.alpha == cplx(2.0, 0.0));

  auto j = base_config();
  j["params"]["alpha"] = json::array({1.0, -0.5});
  CHECK(parse_scenario(j).params.alpha == cplx(1.0, -0.5));
}

TEST_CASE("scenario validation") {
  auto expect_bad = [](const std::function<void(json&)>& edit) {
    auto j = base_config();
    edit(j);
    CHECK_THROWS_AS(parse_scenario(j), ConfigError);
  };
  expect_bad([](json& j) { j["task"] = "nonsense"; });
  expect_bad([](json& j) { j.erase("params"); });
  expect_bad([](json& j) { j["params"].erase("delta"); });
  expect_bad([](json& j) { j["params"]["delta"] = "big"; });
  expect_bad([](json& j) { j["typo"] = 1; });
  expect_bad([](json& j) { j.erase("time"); });
  expect_bad([](json& j) { j["t"] = 3.0; });
  expect_bad([](json& j) { j["time"]["step"] = 0.0; });
  expect_bad([](json& j) { j["time"]["stop"] = -1.0; });
  expect_bad([](json& j) { j["branch"] = "up"; });
  expect_bad([](json& j) { j["method"] = "linear"; });
  expect_bad([](json& j) { j["output"]["format"] = "binary"; });
  expect_bad([](json& j) {
    j["task"] = "entropy-lambda-scan";
    j.erase("time");
    j["lambda"] = {{"start", 0.1}, {"stop", 0.2}, {"step", 0.05}};
  });
  expect_bad([](json& j) {
    j["task"] = "q-grid";
    j["method"] = "series";
  });
  expect_bad([](json& j) { j["smoothing"] = {{"window", 4}}; });
  expect_bad([](json& j) { j["quadrature"] = true; });
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const auto s = format_number(v);
    CHECK(std::stod(s) == v);
    CHECK(s.size() <= 24);
  }
}

TEST_CASE("parallel_for fills by index and reports the first failure") {
  std::vector<int> out(50, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 4 || i == 7) throw std::runtime_error("bad " + std::to_string(i));
                                 }),
                    "bad 4");
}

TEST_CASE("qubit-dynamics run") {
  const auto s = parse_scenario(base_config());
  const auto r = run_scenario(s, {1, false});
  REQUIRE(r.table.rows.size() == 5);
  CHECK(r.table.columns.size() == 7);
  CHECK(r.table.rows[0][0] == 0.0);
  CHECK(r.table.rows[0][1] == 0.0);  // zeta_series(0)
  // threads do not change the numbers
  const auto r3 = run_scenario(s, {3, false});
  CHECK(r3.table.rows == r.table.rows);
}

TEST_CASE("q-grid binary round trip") {
  auto j = base_config();
  j["task"] = "q-grid";
  j["method"] = "series";
  j.erase("time");
  j["t"] = 0.0;
  j["grid"] = {{"n_re", 41}, {"n_im", 31}};
  j["params"]["lambda"] = 0.08;
  j["output"] = {{"path", "grid"}, {"format", "both"}};
  const auto s = parse_scenario(j);
  const auto r = run_scenario(s, {2, false});
  const auto dir = scratch("grid");
  const auto files = write_outputs(s, r, dir);
  REQUIRE(files.size() == 2);
  const auto back = read_grid_binary(files[1]);
  CHECK(back.grid.n_re() == 41);
  CHECK(back.grid.n_im() == 31);
  CHECK(back.grid.values == r.grid->values);
  CHECK(back.grid.re.weights == r.grid->re.weights);
  CHECK(back.params_hash == fnv1a(canonical_params(r.grid->params)));
  CHECK(back.grid.total() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("small delocalization and moment runs") {
  auto j = base_config();
  j["task"] = "slope-fit";
  j["method"] = "series";
  j.erase("time");
  j["t"] = 76.5;
  j["params"] = {{"delta", 0.15}, {"epsilon", 0.1}, {"alpha", 1.0}};
  j["lambda"] = {{"start", 0.0}, {"stop", 1.2}, {"step", 0.2}};
  j["grid"] = {{"n_re", 61}, {"n_im", 61}};
  j["smoothing"] = {{"window", 3}, {"order", 1}};
  const auto s = parse_scenario(j);
  try {
    const auto r = run_scenario(s, {1, false});
    CHECK(r.table.columns.back() == "w_ratio");
    for (const auto& row : r.table.rows) CHECK(row[6] == doctest::Approx(1.0 / row[5]));
  } catch (const NumericalError& e) {
    // a monotone curve on this coarse scan is a legitimate outcome
    CHECK(std::string(e.what()).find("boundary") != std::string::npos);
  }

  auto m = base_config();
  m["task"] = "moments";
  m["method"] = "series";
  m["quadrature"] = true;
  m["params"]["alpha"] = 1.0;
  m["params"]["lambda"] = 0.16;
  m["grid"] = {{"n_re", 81}, {"n_im", 81}};
  const auto r = run_scenario(parse_scenario(m), {1, false});
  for (const auto& row : r.table.rows)
    for (int k = 1; k <= 5; ++k) CHECK(row[k] == doctest::Approx(row[k + 5]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  const auto cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << base_config().dump(2);
  }
  CHECK(run_cli("run " + cfg.string() + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli("run " + cfg.string() + " --out " + (dir / "b").string() + " --threads 2") == 0);
  CHECK(slurp(dir / "a" / "unit.csv") == slurp(dir / "b" / "unit.csv"));
  CHECK(slurp(dir / "a" / "unit.csv").rfind("# tool:", 0) == 0);

  CHECK(run_cli("run " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  {
    auto j = base_config();
    j["params"]["omega"] = -1.0;
    std::ofstream out(dir / "neg.json");
    out << j.dump();
  }
  CHECK(run_cli("run " + (dir / "neg.json").string() + " --out " + dir.string()) == 2);
  {
    // |alpha_hat| = 0 has no theta nome
    auto j = base_config();
    j["params"]["alpha"] = -0.15;
    j["method"] = "theta";
    std::ofstream out(dir / "num.json");
    out << j.dump();
  }
  CHECK(run_cli("run " + (dir / "num.json").string() + " --out " + dir.string()) == 3);
}
