#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mcs/graphs.hpp"

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "mcs_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(bool(out));
  out << text;
}

CliResult run_cli(const std::string& args) {
  const fs::path dir = work_dir();
  const fs::path out_p = dir / "stdout.txt";
  const fs::path err_p = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + MCS_CLI_PATH + "\" " + args + " > \"" +
                          out_p.string() + "\" 2> \"" + err_p.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliResult res;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  res.exit_code = WEXITSTATUS(status);
  res.out = slurp(out_p);
  res.err = slurp(err_p);
  return res;
}

double value_after(const std::string& text, const std::string& key) {
  const std::size_t at = text.find(key);
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size()));
}

fs::path chain_config() {
  const fs::path p = work_dir() / "chain.json";
  write(p, R"json({
    "mode": "complete",
    "seeds": [1],
    "market": {"mu": 5, "s": 20, "t": 0.05, "c": 15},
    "population": {"n": 50, "a": 15, "b": 15},
    "graph": {"kind": "chain"}
  })json");
  return p;
}

fs::path ties_config() {
  const fs::path p = work_dir() / "ties.json";
  write(p, R"json({
    "mode": "complete",
    "seeds": [3],
    "market": {"mu": 0.1, "s": 20, "t": 0.05, "c": 15},
    "population": {"n": 20,
                   "a": {"dist": "normal", "mean": 15, "var": 2},
                   "b": {"dist": "normal", "mean": 15, "var": 2}},
    "graph": {"kind": "normal_ties", "tie_mean": 0.05, "tie_var": 1.0}
  })json");
  return p;
}

fs::path bayes_config() {
  const fs::path p = work_dir() / "bayes.json";
  write(p, R"json({
    "mode": "bayesian",
    "seeds": [1],
    "market": {"mu": 10, "s": 20, "t": 0.05, "c": 15},
    "population": {"n": 100},
    "degree_model": {"gamma": 0.01, "family": "discretized_normal",
                     "k_max": 40, "mean": 20, "var": 10}
  })json");
  return p;
}

}  // namespace

TEST_CASE("solve-complete reports both mechanisms on the line network") {
  const CliResult res = run_cli("solve-complete --config " + chain_config().string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("complete-information instance: n=50 seed=1") != std::string::npos);
  const double r_star = value_after(res.out, "uniform: r*=");
  CHECK(r_star > 25.0);
  CHECK(r_star < 100.0);
  CHECK(res.out.find("discriminatory: r* min=") != std::string::npos);
  CHECK(res.out.find("revenue=") != std::string::npos);
  CHECK(res.out.find("iterations=") != std::string::npos);  // direct solve reports 0
}

TEST_CASE("mechanism flag restricts the solve") {
  const std::string base = "solve-complete --config " + chain_config().string();
  const CliResult uni = run_cli(base + " --mechanism uniform");
  CHECK(uni.exit_code == 0);
  CHECK(uni.out.find("uniform: r*=") != std::string::npos);
  CHECK(uni.out.find("discriminatory") == std::string::npos);
  const CliResult disc = run_cli(base + " --mechanism disc");
  CHECK(disc.exit_code == 0);
  CHECK(disc.out.find("uniform:") == std::string::npos);
  CHECK(disc.out.find("discriminatory: r* min=") != std::string::npos);
  CHECK(run_cli(base + " --mechanism bogus").exit_code != 0);
}

TEST_CASE("per-mu csv and seed override") {
  const fs::path cfg = ties_config();
  const fs::path csv1 = work_dir() / "mu1.csv";
  const fs::path csv2 = work_dir() / "mu2.csv";

  CHECK(run_cli("solve-complete --config " + cfg.string() + " --out " + csv1.string())
            .exit_code == 0);
  const std::string text = slurp(csv1);
  CHECK(text.rfind("mu,a,b,quad_cost,r_uniform,x_uniform,utility_uniform,r_disc,x_disc,"
                   "utility_disc\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);  // header + one row per MU

  // same seed, same bytes
  CHECK(run_cli("solve-complete --config " + cfg.string() + " --out " + csv2.string())
            .exit_code == 0);
  CHECK(slurp(csv2) == text);
  // --seed overrides the config's first seed and changes the draw
  CHECK(run_cli("solve-complete --config " + cfg.string() + " --seed 4 --out " + csv2.string())
            .exit_code == 0);
  CHECK(slurp(csv2) != text);
}

TEST_CASE("flag errors and config errors exit 1") {
  const CliResult missing = run_cli("solve-complete --config /nonexistent/x.json");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("cannot open config") != std::string::npos);

  const CliResult wrong_mode = run_cli("solve-complete --config " + bayes_config().string());
  CHECK(wrong_mode.exit_code == 1);
  CHECK(wrong_mode.err.find("needs a config with mode \"complete\"") != std::string::npos);

  const CliResult bad_eps =
      run_cli("solve-complete --config " + chain_config().string() + " --epsilon 0");
  CHECK(bad_eps.exit_code == 1);
  CHECK(bad_eps.err.find("epsilon must be > 0") != std::string::npos);

  CHECK(run_cli("solve-complete").exit_code != 0);  // --config is required
  CHECK(run_cli("").exit_code != 0);                // a subcommand is required
}

TEST_CASE("solve-bayesian prints the closed-form rewards and type table") {
  const fs::path csv = work_dir() / "types.csv";
  const CliResult res =
      run_cli("solve-bayesian --config " + bayes_config().string() + " --out " + csv.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("uniform: r*=71.2087658593575") != std::string::npos);
  CHECK(res.out.find("discriminatory: r_bar=") != std::string::npos);
  CHECK(value_after(res.out, "expected_revenue=") > 0.0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("k,l,p_out,h_in,r_uniform,x_uniform,r_disc,x_disc\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 41 * 41 + 1);
}

TEST_CASE("sweep writes deterministic csv and flags partial failures") {
  const fs::path cfg = work_dir() / "nsweep.json";
  write(cfg, R"json({
    "mode": "complete",
    "seeds": [1, 2],
    "market": {"mu": 0.1, "s": 20, "t": 0.05, "c": 15},
    "population": {"n": 10,
                   "a": {"dist": "normal", "mean": 15, "var": 2},
                   "b": {"dist": "normal", "mean": 15, "var": 2}},
    "graph": {"kind": "normal_ties", "tie_mean": 0.05, "tie_var": 1.0},
    "sweep": {"variable": "n", "values": [5, 10]}
  })json");
  const fs::path csv1 = work_dir() / "sweep1.csv";
  const fs::path csv2 = work_dir() / "sweep2.csv";
  const CliResult res = run_cli("sweep --config " + cfg.string() + " --out " + csv1.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("rows=4 errors=0") != std::string::npos);
  CHECK(run_cli("sweep --config " + cfg.string() + " --out " + csv2.string()).exit_code == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(slurp(csv1).rfind("sweep_value,seed,", 0) == 0);

  const fs::path bad = work_dir() / "badsweep.json";
  write(bad, R"json({
    "mode": "bayesian",
    "seeds": [1],
    "market": {"mu": 1, "s": 10, "t": 0.1, "c": 1},
    "population": {"n": 10},
    "degree_model": {"gamma": 0.05, "family": "discretized_normal",
                     "k_max": 5, "mean": 2, "var": 0.5},
    "sweep": {"variable": "gamma", "values": [0.05, 0.9]}
  })json");
  const CliResult part = run_cli("sweep --config " + bad.string() + " --out " + csv2.string());
  CHECK(part.exit_code == 2);
  CHECK(part.out.find("rows=2 errors=1") != std::string::npos);
  CHECK(part.out.find("error:") != std::string::npos);
  CHECK(slurp(csv2).find("gamma") != std::string::npos);  // error text lands in the csv

  // sweep over a missing config still exits 1
  CHECK(run_cli("sweep --config /nonexistent.json --out " + csv2.string()).exit_code == 1);
}

TEST_CASE("graph-gen round-trips through the edge-list loader") {
  const fs::path cfg = work_dir() / "chain12.json";
  write(cfg, R"json({
    "mode": "complete",
    "seeds": [1],
    "market": {"mu": 5, "s": 20, "t": 0.05, "c": 15},
    "population": {"n": 12, "a": 15, "b": 15},
    "graph": {"kind": "chain"}
  })json");
  const fs::path edges = work_dir() / "chain12.edges";
  const CliResult res = run_cli("graph-gen --config " + cfg.string() + " --out " + edges.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("n=12 edges=22") != std::string::npos);
  CHECK(res.out.find("applied_scale=1") != std::string::npos);

  const mcs::SocialGraph loaded = mcs::load_edge_list(edges.string());
  REQUIRE(loaded.n() == 12);
  long nonzero = 0;
  for (long i = 0; i < 12; ++i)
    for (long j = 0; j < 12; ++j) {
      if (loaded.g(i, j) != 0.0) ++nonzero;
      CHECK(loaded.g(i, j) == loaded.g(j, i));  // the line network is symmetric
    }
  CHECK(nonzero == 22);
  CHECK(loaded.g(0, 1) == 0.05);
}

TEST_SUITE_END();
