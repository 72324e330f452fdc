// Command-line harness: seeded single solves and sweeps of the crowdsensing
// incentive game, with CSV output. See README.md for the config format.
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mcs/stage1.hpp"
#include "mcs/sweep.hpp"

namespace {

using namespace mcs;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  double epsilon = 1e-8;
  bool epsilon_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string mechanism;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required) {
  cmd->add_option("--config", args.config_path, "scenario config (JSON)")->required();
  auto* out = cmd->add_option("--out", args.out_path, "output CSV path");
  if (out_required) out->required();
  cmd->add_option("--epsilon", args.epsilon, "solver precision threshold")
      ->each([&args](const std::string&) { args.epsilon_set = true; });
  cmd->add_option("--seed", args.seed, "override the config's first seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--mechanism", args.mechanism, "uniform|disc|both")
      ->check(CLI::IsMember({"uniform", "disc", "both"}));
}

ScenarioConfig load_config(const CommonArgs& args, Mode expected_mode, const char* cmd_name) {
  ScenarioConfig cfg = ScenarioConfig::from_json_file(args.config_path);
  if (cfg.mode != expected_mode)
    throw ConfigError(std::string(cmd_name) + " needs a config with mode \"" +
                      (expected_mode == Mode::CompleteInfo ? "complete" : "bayesian") + "\"");
  if (args.epsilon_set) cfg.epsilon = args.epsilon;
  if (args.seed_set) {
    if (cfg.seeds.empty()) cfg.seeds.push_back(args.seed);
    cfg.seeds[0] = args.seed;
  }
  if (args.mechanism == "uniform") cfg.mechanism = Mechanism::Uniform;
  if (args.mechanism == "disc") cfg.mechanism = Mechanism::Discriminatory;
  if (args.mechanism == "both") cfg.mechanism = Mechanism::Both;
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

void print_outcome(const char* label, const EquilibriumOutcome& out) {
  std::cout << label << ": revenue=" << format_double(out.revenue)
            << " total_utility=" << format_double(out.utilities.sum())
            << " interior=" << (out.diagnostics.interior ? 1 : 0)
            << " iterations=" << out.diagnostics.iterations << "\n";
  if (out.diagnostics.projected_fallback)
    std::cout << label << ": non-interior solve, projected fallback used (unprojected revenue "
              << format_double(*out.diagnostics.unprojected_revenue) << ")\n";
  if (out.diagnostics.negative_reward)
    std::cout << label << ": warning, some reward components are negative\n";
}

int cmd_solve_complete(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args, Mode::CompleteInfo, "solve-complete");
  const std::uint64_t seed = cfg.seeds.front();
  Rng pop_rng(derive_seed(seed, 1));
  const MuPopulation pop = cfg.population.sample(pop_rng);
  const SocialGraph graph = gen_graph(cfg.graph, pop, derive_seed(seed, 2));
  Stage2Config s2;
  s2.epsilon = cfg.epsilon;
  s2.cost_model = pop.quad_cost ? CostModel::QuadraticHeterogeneous : CostModel::LinearUniform;

  const bool want_uniform = cfg.mechanism != Mechanism::Discriminatory;
  const bool want_disc = cfg.mechanism != Mechanism::Uniform;
  std::cout << "complete-information instance: n=" << pop.n() << " seed=" << seed << "\n";

  std::optional<EquilibriumOutcome> out_u, out_d;
  int failures = 0, attempts = 0;
  if (want_uniform) {
    ++attempts;
    try {
      const RewardSchedule r = uniform_reward(pop, graph, cfg.market, s2);
      std::cout << "uniform: r*=" << format_double(std::get<UniformReward>(r.value).value) << "\n";
      out_u = evaluate_mechanism(pop, graph, cfg.market, r, s2);
      print_outcome("uniform", *out_u);
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "uniform: error: " << e.what() << "\n";
    }
  }
  if (want_disc) {
    ++attempts;
    try {
      const RewardSchedule r = discriminatory_reward(pop, graph, cfg.market, s2);
      const Vec rv = r.per_mu(pop.n());
      std::cout << "discriminatory: r* min=" << format_double(rv.minCoeff())
                << " max=" << format_double(rv.maxCoeff())
                << " mean=" << format_double(rv.mean()) << "\n";
      out_d = evaluate_mechanism(pop, graph, cfg.market, r, s2);
      print_outcome("discriminatory", *out_d);
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "discriminatory: error: " << e.what() << "\n";
    }
  }

  if (!args.out_path.empty()) {
    std::string csv = "mu,a,b,quad_cost,r_uniform,x_uniform,utility_uniform,r_disc,x_disc,utility_disc\n";
    const Vec ru = out_u ? out_u->rewards.per_mu(pop.n()) : Vec();
    const Vec rd = out_d ? out_d->rewards.per_mu(pop.n()) : Vec();
    for (long i = 0; i < pop.n(); ++i) {
      csv += std::to_string(i) + ',' + format_double(pop.a(i)) + ',' + format_double(pop.b(i)) + ',';
      if (pop.quad_cost) csv += format_double((*pop.quad_cost)(i));
      for (const auto* o : {&out_u, &out_d}) {
        if (o->has_value()) {
          const Vec& r = o == &out_u ? ru : rd;
          csv += ',' + format_double(r(i)) + ',' + format_double((**o).x(i)) + ',' +
                 format_double((**o).utilities(i));
        } else {
          csv += ",,,";
        }
      }
      csv += '\n';
    }
    write_file(args.out_path, csv);
    std::cout << "wrote " << args.out_path << "\n";
  }
  if (failures == 0) return 0;
  return failures == attempts ? 1 : 2;
}

int cmd_solve_bayesian(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args, Mode::Bayesian, "solve-bayesian");
  const DegreeModel dm = cfg.degree_model.build();
  std::cout << "bayesian instance: k_max=" << dm.k_max << " k_bar=" << format_double(dm.mean_out())
            << " var_k=" << format_double(dm.var_out()) << " gamma=" << format_double(dm.gamma)
            << "\n";

  const bool want_uniform = cfg.mechanism != Mechanism::Discriminatory;
  const bool want_disc = cfg.mechanism != Mechanism::Uniform;
  std::optional<double> r_t3;
  std::optional<TypeTable> r_t4, x_t3, x_t4;
  int failures = 0, attempts = 0;
  if (want_uniform) {
    ++attempts;
    try {
      r_t3 = uniform_reward_t3(dm, cfg.market);
      const BayesianScenario scn{dm, cfg.market, RewardSchedule::uniform(*r_t3)};
      x_t3 = equilibrium_participation(scn);
      std::cout << "uniform: r*=" << format_double(*r_t3)
                << " expected_revenue=" << format_double(expected_revenue(scn))
                << " interior=" << (x_t3->interior ? 1 : 0) << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "uniform: error: " << e.what() << "\n";
    }
  }
  if (want_disc) {
    ++attempts;
    try {
      r_t4 = discriminatory_reward_t4(dm, cfg.market);
      const BayesianScenario scn{dm, cfg.market, RewardSchedule::type_indexed(r_t4->values)};
      x_t4 = equilibrium_participation(scn);
      std::cout << "discriminatory: r_bar=" << format_double(r_t4->r_bar)
                << " psi=" << format_double(r_t4->psi)
                << " expected_revenue=" << format_double(expected_revenue(scn))
                << " interior=" << (x_t4->interior ? 1 : 0) << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "discriminatory: error: " << e.what() << "\n";
    }
  }

  if (!args.out_path.empty()) {
    std::string csv = "k,l,p_out,h_in,r_uniform,x_uniform,r_disc,x_disc\n";
    for (int k = 0; k <= dm.k_max; ++k)
      for (int l = 0; l <= dm.k_max; ++l) {
        csv += std::to_string(k) + ',' + std::to_string(l) + ',' + format_double(dm.p_out(k)) +
               ',' + format_double(dm.h_in(l));
        if (r_t3)
          csv += ',' + format_double(*r_t3) + ',' + format_double(x_t3->values(k, l));
        else
          csv += ",,";
        if (r_t4)
          csv += ',' + format_double(r_t4->values(k, l)) + ',' + format_double(x_t4->values(k, l));
        else
          csv += ",,";
        csv += '\n';
      }
    write_file(args.out_path, csv);
    std::cout << "wrote " << args.out_path << "\n";
  }
  if (failures == 0) return 0;
  return failures == attempts ? 1 : 2;
}

int cmd_sweep(const CommonArgs& args) {
  ScenarioConfig cfg = ScenarioConfig::from_json_file(args.config_path);
  if (args.epsilon_set) cfg.epsilon = args.epsilon;
  if (args.seed_set && !cfg.seeds.empty()) cfg.seeds[0] = args.seed;
  if (args.mechanism == "uniform") cfg.mechanism = Mechanism::Uniform;
  if (args.mechanism == "disc") cfg.mechanism = Mechanism::Discriminatory;
  if (args.mechanism == "both") cfg.mechanism = Mechanism::Both;
  cfg.validate();

  const SweepResult res = run_scenario(cfg);
  emit_csv(res, args.out_path);
  const long errors = res.error_rows();
  std::cout << "rows=" << res.rows.size() << " errors=" << errors << " -> " << args.out_path
            << "\n";
  if (errors > 0) {
    for (const auto& row : res.rows)
      if (!row.error.empty())
        std::cout << "row seed=" << row.seed << " error: " << row.error << "\n";
    return 2;
  }
  return 0;
}

int cmd_graph_gen(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args, Mode::CompleteInfo, "graph-gen");
  const std::uint64_t seed = cfg.seeds.front();
  Rng pop_rng(derive_seed(seed, 1));
  const MuPopulation pop = cfg.population.sample(pop_rng);
  GraphGenDiagnostics diag;
  const SocialGraph graph = gen_graph(cfg.graph, pop, derive_seed(seed, 2), &diag);
  save_edge_list(args.out_path, graph);
  long edges = 0;
  for (long i = 0; i < graph.n(); ++i)
    for (long j = 0; j < graph.n(); ++j)
      if (graph.g(i, j) != 0.0) ++edges;
  std::cout << "n=" << graph.n() << " edges=" << edges
            << " applied_scale=" << format_double(diag.applied_scale) << " -> " << args.out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Socially-aware crowdsensing incentive game solver"};
  app.require_subcommand(1);

  CommonArgs solve_complete_args, solve_bayesian_args, sweep_args, graph_gen_args;
  auto* sc = app.add_subcommand("solve-complete",
                                "solve one seeded complete-information instance");
  add_common(sc, solve_complete_args, false);
  auto* sb = app.add_subcommand("solve-bayesian", "solve a Bayesian degree-model instance");
  add_common(sb, solve_bayesian_args, false);
  auto* sw = app.add_subcommand("sweep", "run a seeded sweep and write CSV rows");
  add_common(sw, sweep_args, true);
  auto* gg = app.add_subcommand("graph-gen", "generate a social graph edge list");
  add_common(gg, graph_gen_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc->parsed()) return cmd_solve_complete(solve_complete_args);
    if (sb->parsed()) return cmd_solve_bayesian(solve_bayesian_args);
    if (sw->parsed()) return cmd_sweep(sweep_args);
    if (gg->parsed()) return cmd_graph_gen(graph_gen_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
