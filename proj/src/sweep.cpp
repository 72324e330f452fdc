#include "mcs/sweep.hpp"

#include <cstdio>
#include <fstream>

#include "mcs/stage1.hpp"

namespace mcs {

namespace {

struct InstanceResult {
  double r_scalar = 0.0;  // uniform mechanism only
  double revenue = 0.0;
  double total_utility = 0.0;
  double total_reward_paid = 0.0;
  bool interior = true;
  long iterations = 0;
  double revenue_unprojected = 0.0;
};

InstanceResult eval_complete(const MuPopulation& pop, const SocialGraph& graph,
                             const MarketParams& market, const Stage2Config& s2,
                             bool discriminatory, double* r_scalar_out) {
  const RewardSchedule rewards = discriminatory ? discriminatory_reward(pop, graph, market, s2)
                                                : uniform_reward(pop, graph, market, s2);
  const EquilibriumOutcome out = evaluate_mechanism(pop, graph, market, rewards, s2);
  InstanceResult res;
  if (!discriminatory && r_scalar_out) *r_scalar_out = std::get<UniformReward>(rewards.value).value;
  res.revenue = out.revenue;
  res.total_utility = out.utilities.sum();
  res.total_reward_paid = rewards.per_mu(pop.n()).dot(out.x);
  res.interior = out.diagnostics.interior;
  res.iterations = out.diagnostics.iterations;
  res.revenue_unprojected = out.diagnostics.unprojected_revenue.value_or(out.revenue);
  return res;
}

InstanceResult eval_bayesian(const DegreeModel& dm, const MarketParams& market, long n,
                             bool discriminatory, double* r_scalar_out) {
  RewardSchedule rewards = RewardSchedule::uniform(0.0);
  if (discriminatory) {
    rewards = RewardSchedule::type_indexed(discriminatory_reward_t4(dm, market).values);
  } else {
    const double r = uniform_reward_t3(dm, market);
    rewards = RewardSchedule::uniform(r);
    if (r_scalar_out) *r_scalar_out = r;
  }
  const BayesianEvaluation ev = evaluate_bayesian({dm, market, rewards});
  InstanceResult res;
  const double scale = static_cast<double>(n);
  res.revenue = scale * ev.revenue;
  res.total_utility = scale * ev.utility;
  res.total_reward_paid = scale * ev.reward_paid;
  res.interior = ev.interior;
  res.iterations = 0;
  res.revenue_unprojected = res.revenue;
  return res;
}

void fill_row(SweepRow& row, const InstanceResult& res, bool discriminatory) {
  if (discriminatory) {
    row.revenue_disc = res.revenue;
    row.total_utility_disc = res.total_utility;
    row.total_reward_paid_disc = res.total_reward_paid;
    row.interior_disc = res.interior;
    row.iterations_disc = res.iterations;
    row.revenue_disc_unprojected = res.revenue_unprojected;
  } else {
    row.revenue_uniform = res.revenue;
    row.total_utility_uniform = res.total_utility;
    row.total_reward_paid_uniform = res.total_reward_paid;
    row.interior_uniform = res.interior;
    row.iterations_uniform = res.iterations;
    row.revenue_uniform_unprojected = res.revenue_unprojected;
  }
}

SweepRow run_row(const ScenarioConfig& cfg, std::optional<double> sweep_value,
                 std::uint64_t seed) {
  SweepRow row;
  row.sweep_value = sweep_value;
  row.seed = seed;
  try {
    const bool want_uniform = cfg.mechanism != Mechanism::Discriminatory;
    const bool want_disc = cfg.mechanism != Mechanism::Uniform;

    if (cfg.mode == Mode::CompleteInfo) {
      Rng pop_rng(derive_seed(seed, 1));
      const MuPopulation pop = cfg.population.sample(pop_rng);
      const SocialGraph graph = gen_graph(cfg.graph, pop, derive_seed(seed, 2));
      Stage2Config s2;
      s2.epsilon = cfg.epsilon;
      s2.cost_model = pop.quad_cost ? CostModel::QuadraticHeterogeneous : CostModel::LinearUniform;
      if (want_uniform) {
        double r_scalar = 0.0;
        fill_row(row, eval_complete(pop, graph, cfg.market, s2, false, &r_scalar), false);
        row.r_uniform = r_scalar;
      }
      if (want_disc) fill_row(row, eval_complete(pop, graph, cfg.market, s2, true, nullptr), true);
    } else {
      const DegreeModel dm = cfg.degree_model.build();
      if (want_uniform) {
        double r_scalar = 0.0;
        fill_row(row, eval_bayesian(dm, cfg.market, cfg.population.n, false, &r_scalar), false);
        row.r_uniform = r_scalar;
      }
      if (want_disc)
        fill_row(row, eval_bayesian(dm, cfg.market, cfg.population.n, true, nullptr), true);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

long SweepResult::error_rows() const {
  long count = 0;
  for (const auto& row : rows)
    if (!row.error.empty()) ++count;
  return count;
}

SweepResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  SweepResult res;
  if (cfg.sweep) {
    for (double value : cfg.sweep->values) {
      ScenarioConfig point = cfg.with_sweep_value(value);
      for (std::uint64_t seed : cfg.seeds) res.rows.push_back(run_row(point, value, seed));
    }
  } else {
    for (std::uint64_t seed : cfg.seeds) res.rows.push_back(run_row(cfg, std::nullopt, seed));
  }
  return res;
}

const char* const kSweepCsvHeader =
    "sweep_value,seed,r_uniform,revenue_uniform,revenue_disc,total_utility_uniform,"
    "total_utility_disc,total_reward_paid_uniform,total_reward_paid_disc,interior_uniform,"
    "interior_disc,iterations_uniform,iterations_disc,revenue_uniform_unprojected,"
    "revenue_disc_unprojected,error";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void append_cell(std::string& line, const std::optional<double>& v) {
  line += ',';
  if (v) line += format_double(*v);
}

void append_cell(std::string& line, const std::optional<bool>& v) {
  line += ',';
  if (v) line += *v ? '1' : '0';
}

void append_cell(std::string& line, const std::optional<long>& v) {
  line += ',';
  if (v) line += std::to_string(*v);
}

}  // namespace

std::string to_csv(const SweepResult& res) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& row : res.rows) {
    std::string line;
    if (row.sweep_value) line += format_double(*row.sweep_value);
    line += ',';
    line += std::to_string(row.seed);
    append_cell(line, row.r_uniform);
    append_cell(line, row.revenue_uniform);
    append_cell(line, row.revenue_disc);
    append_cell(line, row.total_utility_uniform);
    append_cell(line, row.total_utility_disc);
    append_cell(line, row.total_reward_paid_uniform);
    append_cell(line, row.total_reward_paid_disc);
    append_cell(line, row.interior_uniform);
    append_cell(line, row.interior_disc);
    append_cell(line, row.iterations_uniform);
    append_cell(line, row.iterations_disc);
    append_cell(line, row.revenue_uniform_unprojected);
    append_cell(line, row.revenue_disc_unprojected);
    line += ',';
    line += csv_escape(row.error);
    out += line;
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& res, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV '" + path + "'");
  const std::string text = to_csv(res);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for CSV '" + path + "'");
}

}  // namespace mcs
