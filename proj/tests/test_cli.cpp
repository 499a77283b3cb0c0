#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "jacobi/io.hpp"

namespace fs = std::filesystem;
using namespace jacobi::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jacobi_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "jacobi");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("config precedence: flags over file over defaults") {
  const fs::path dir = scratch("precedence");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "# comment\nq = 2\nqsweep = 1, 2\nxmax = 50\n";
  CHECK(invoke({"boundstate", "--config", (dir / "run.cfg").string(), "--xmax", "60", "--out", (dir / "o").string()}) == 0);
  const auto j = load(dir / "o" / "boundstate.json");
  CHECK(j["config"]["q"] == "2");
  CHECK(j["config"]["xmax"] == "60");
  CHECK(j["config"]["N"] == "500");
  CHECK(j["bound_state"]["q"] == 2.0);

  // config.txt round-trips to the same resolved configuration.
  RunConfig again = default_config("boundstate");
  again.merge_file((dir / "o" / "config.txt").string());
  CHECK(again.to_json() == j["config"]);
}

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("usage");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "nonsense_key = 1\n";
  CHECK(invoke({"boundstate", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}) == 2);
  CHECK(invoke({"boundstate", "--q", "abc", "--out", dir.string()}) == 2);
  CHECK(invoke({"spectrum", "--bogus", "1"}) == 2);
  CHECK(invoke({}) == 2);
  CHECK(invoke({"decay", "--kind", "neither", "--out", dir.string()}) == 2);
  CHECK(invoke({"boundstate", "--config", (dir / "missing.cfg").string()}) == 2);
}

TEST_CASE("RunConfig parsing") {
  RunConfig c(std::map<std::string, std::string>{{"a", "1"}, {"b", "x"}});
  c.merge_text("a = 2.5  # trailing\n\n b=hello world\n", "inline");
  CHECK(c.real("a") == 2.5);
  CHECK(c.str("b") == "hello world");
  CHECK_THROWS_AS((void)c.integer("a"), UsageError);
  CHECK_THROWS_AS(c.merge_text("novalue\n", "inline"), UsageError);
  CHECK_THROWS_AS(c.set("c", "1"), UsageError);
}

TEST_CASE("spectrum: q = 0 gives w = e^-lambda, output is deterministic") {
  const fs::path a = scratch("spec_a");
  const fs::path b = scratch("spec_b");
  CHECK(invoke({"spectrum", "--q", "0", "--lsamples", "12", "--xmax", "6", "--out", a.string()}) == 0);
  CHECK(invoke({"spectrum", "--q", "0", "--lsamples", "12", "--xmax", "6", "--out", b.string(), "--threads", "3"}) == 0);
  CHECK(slurp(a / "g_table.csv") == slurp(b / "g_table.csv"));
  CHECK(slurp(a / "eigen_phi.csv") == slurp(b / "eigen_phi.csv"));

  std::istringstream in(slurp(a / "g_table.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema: jacobi.g_table v1");
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string l, g, w;
    std::getline(ss, l, ',');
    std::getline(ss, g, ',');
    std::getline(ss, w, ',');
    CHECK(std::stod(w) == std::exp(-std::stod(l)));
    ++rows;
  }
  CHECK(rows == 12);
  CHECK(load(a / "spectrum.json")["config"]["q"] == "0");
}

TEST_CASE("spectrum: q = 1 g log^2 column approaches 1 near the threshold") {
  const fs::path a = scratch("spec_q1");
  CHECK(invoke({"spectrum", "--q", "1", "--lmin", "1e-30", "--lmax", "1e-2", "--lsamples", "8", "--xmax", "3", "--out", a.string()}) == 0);
  std::istringstream in(slurp(a / "g_table.csv"));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<double> col;
  while (std::getline(in, line)) col.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  CHECK(std::abs(col.front() - 1.0) < 0.1);
  CHECK(std::abs(col.front() - 1.0) < std::abs(col.back() - 1.0));
  CHECK(fs::exists(a / "eigen_phi_perturbed.csv"));
}

TEST_CASE("boundstate defaults") {
  const fs::path a = scratch("bound");
  CHECK(invoke({"boundstate", "--out", a.string()}) == 0);
  const auto j = load(a / "boundstate.json");
  const double l0 = j["bound_state"]["lambda0"];
  CHECK(l0 > -0.5);
  CHECK(l0 < -0.4);
  CHECK(j["truncated_residual"].get<double>() < 1e-8);
  CHECK(j["sweep_monotone_decreasing"] == true);
}

TEST_CASE("propagate: identity at t = 0, oracle and unitarity columns") {
  const fs::path a = scratch("prop");
  CHECK(invoke({"propagate", "--tmin", "0", "--tmax", "2", "--tsamples", "3", "--xmax", "4", "--out", a.string()}) == 0);
  const auto j = load(a / "propagate.json");
  CHECK(j["per_t"][0]["identity_defect"].get<double>() < 1e-6);
  CHECK(j["max_oracle_diff"].get<double>() < 1e-6);
  CHECK(j["max_unitarity_defect"].get<double>() < 1e-6);
  CHECK(slurp(a / "kernel.csv").rfind("# schema: jacobi.kernel_table v1\n", 0) == 0);
}

TEST_CASE("decay: free slope and constant check") {
  const fs::path a = scratch("decay");
  CHECK(invoke({"decay", "--xmax", "20", "--tsamples", "10", "--out", a.string()}) == 0);
  const auto j = load(a / "decay.json");
  CHECK(std::abs(j["fit"]["slope"].get<double>() + 1.0) < 0.05);
  CHECK(j["constant_check"]["violations"] == 0);
}

TEST_CASE("verify passes, and fails under an injected weight fault") {
  const fs::path a = scratch("verify");
  CHECK(invoke({"verify", "--out", a.string()}) == 0);
  const auto j = load(a / "verify.json");
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() >= 10);
  CHECK(invoke({"verify", "--inject-fault", "weight", "--out", (a / "fault").string()}) == 1);
  CHECK(load(a / "fault" / "verify.json")["pass"] == false);
}
