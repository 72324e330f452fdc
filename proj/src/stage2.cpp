#include "mcs/stage2.hpp"

#include <cmath>

#include "mcs/numerics.hpp"

namespace mcs {

void Stage2Config::validate(const MuPopulation& pop) const {
  if (!(epsilon > 0.0)) throw Error("stage2 config: epsilon must be > 0");
  if (max_iter < 1) throw Error("stage2 config: max_iter must be >= 1");
  if (!(solve_tol > 0.0)) throw Error("stage2 config: solve_tol must be > 0");
  if (cost_model == CostModel::QuadraticHeterogeneous && !pop.quad_cost)
    throw Error("stage2 config: quadratic cost model needs pop.quad_cost");
  if (cost_model == CostModel::LinearUniform && pop.quad_cost)
    throw Error("stage2 config: pop carries quad_cost but cost model is linear");
}

namespace {

Vec response_denominators(const MuPopulation& pop, const Stage2Config& cfg) {
  Vec d = 2.0 * pop.b;
  if (cfg.cost_model == CostModel::QuadraticHeterogeneous) d += 2.0 * (*pop.quad_cost);
  return d;
}

void validate_inputs(const MuPopulation& pop, const SocialGraph& graph,
                     const MarketParams& market, const Stage2Config& cfg) {
  pop.validate();
  graph.validate();
  market.validate();
  cfg.validate(pop);
  check_dim("graph", pop.n(), graph.n());
}

EquilibriumOutcome finalize(Vec x, const RewardSchedule& rewards, const MuPopulation& pop,
                            const SocialGraph& graph, const MarketParams& market,
                            SolveDiagnostics diagnostics) {
  const long n = pop.n();
  const Vec r = rewards.per_mu(n);
  EquilibriumOutcome out;
  out.x = std::move(x);
  out.rewards = rewards;
  out.utilities.resize(n);
  for (long i = 0; i < n; ++i) out.utilities(i) = mu_utility(i, out.x, r, pop, graph, market);
  out.revenue = csp_revenue(out.x, rewards, market);
  diagnostics.interior = (out.x.array() > 0.0).all();
  diagnostics.negative_reward = r.minCoeff() < 0.0;
  out.diagnostics = diagnostics;
  return out;
}

}  // namespace

Mat game_matrix(const MuPopulation& pop, const SocialGraph& graph, const Stage2Config& cfg) {
  Mat m = -graph.g;
  m.diagonal() += response_denominators(pop, cfg);
  return m;
}

Vec game_rhs(const MuPopulation& pop, const MarketParams& market, const Vec& r,
             const Stage2Config& cfg) {
  check_dim("r", pop.n(), r.size());
  Vec rhs = pop.a + r;
  if (cfg.cost_model == CostModel::LinearUniform) rhs.array() -= market.c;
  return rhs;
}

double best_response(long i, const Vec& x, double r_i, const MuPopulation& pop,
                     const SocialGraph& graph, const MarketParams& market,
                     const Stage2Config& cfg) {
  const long n = pop.n();
  check_dim("x", n, x.size());
  check_dim("graph", n, graph.n());
  if (i < 0 || i >= n) throw Error("best_response: index out of range");
  const double denom = 2.0 * pop.b(i) + (cfg.cost_model == CostModel::QuadraticHeterogeneous
                                             ? 2.0 * (*pop.quad_cost)(i)
                                             : 0.0);
  const double c = cfg.cost_model == CostModel::LinearUniform ? market.c : 0.0;
  const double v = (r_i - c + pop.a(i) + graph.g.row(i).dot(x)) / denom;
  return v > 0.0 ? v : 0.0;
}

EquilibriumOutcome dynamics(const MuPopulation& pop, const SocialGraph& graph,
                            const MarketParams& market, const RewardSchedule& rewards,
                            const Stage2Config& cfg, const Vec* x0) {
  validate_inputs(pop, graph, market, cfg);
  const Assumption1Report a1 = validate_assumption1(pop, graph);
  if (!a1.holds)
    throw Error("dynamics: Assumption 1 violated, worst row ratio " +
                std::to_string(a1.worst_row_ratio));

  const long n = pop.n();
  const Vec r = rewards.per_mu(n);
  const Vec d = response_denominators(pop, cfg);
  const Vec base = game_rhs(pop, market, r, cfg).cwiseQuotient(d);

  Vec x = x0 ? *x0 : Vec::Zero(n);
  if (x0) check_dim("x0", n, x0->size());

  SolveDiagnostics diag;
  double prev_step_inf = -1.0;
  bool converged = false;
  double step_l1 = 0.0;
  while (diag.iterations < cfg.max_iter) {
    const Vec xn =
        (base.array() + (graph.g * x).array() / d.array()).max(0.0).matrix();
    step_l1 = (xn - x).lpNorm<1>();
    const double step_inf = (xn - x).lpNorm<Eigen::Infinity>();
    if (prev_step_inf > 0.0) {
      const double ratio = step_inf / prev_step_inf;
      if (ratio > diag.max_contraction_ratio) diag.max_contraction_ratio = ratio;
    }
    prev_step_inf = step_inf;
    x = xn;
    ++diag.iterations;
    if (step_l1 <= cfg.epsilon) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericsError("dynamics: max_iter = " + std::to_string(cfg.max_iter) +
                        " exceeded, last l1 step " + std::to_string(step_l1));

  const Vec final_map =
      (base.array() + (graph.g * x).array() / d.array()).max(0.0).matrix();
  diag.residual_inf_norm = (final_map - x).lpNorm<Eigen::Infinity>();
  return finalize(std::move(x), rewards, pop, graph, market, diag);
}

EquilibriumOutcome closed_form(const MuPopulation& pop, const SocialGraph& graph,
                               const MarketParams& market, const RewardSchedule& rewards,
                               const Stage2Config& cfg) {
  validate_inputs(pop, graph, market, cfg);
  const Assumption1Report a1 = validate_assumption1(pop, graph);
  if (!a1.holds)
    throw Error("closed_form: Assumption 1 violated, worst row ratio " +
                std::to_string(a1.worst_row_ratio));

  const long n = pop.n();
  const Vec r = rewards.per_mu(n);
  const Vec x = solve_dd({game_matrix(pop, graph, cfg), game_rhs(pop, market, r, cfg)},
                         cfg.solve_tol);

  if ((x.array() > 0.0).all()) {
    SolveDiagnostics diag;
    const Vec d = response_denominators(pop, cfg);
    const Vec base = game_rhs(pop, market, r, cfg).cwiseQuotient(d);
    const Vec map = (base.array() + (graph.g * x).array() / d.array()).max(0.0).matrix();
    diag.residual_inf_norm = (map - x).lpNorm<Eigen::Infinity>();
    return finalize(x, rewards, pop, graph, market, diag);
  }

  // The unprojected solve leaves the positive orthant: fall back to the
  // projected fixed point and keep the raw revenue for reporting.
  const double raw_revenue = csp_revenue(x, rewards, market);
  EquilibriumOutcome out = dynamics(pop, graph, market, rewards, cfg);
  out.diagnostics.projected_fallback = true;
  out.diagnostics.unprojected_revenue = raw_revenue;
  return out;
}

bool verify_nash(const EquilibriumOutcome& outcome, const MuPopulation& pop,
                 const SocialGraph& graph, const MarketParams& market, const Stage2Config& cfg,
                 long grid, double tol) {
  validate_inputs(pop, graph, market, cfg);
  if (grid < 2) throw Error("verify_nash: grid must be >= 2");
  const long n = pop.n();
  check_dim("x", n, outcome.x.size());
  const Vec r = outcome.rewards.per_mu(n);

  const double hi = 2.0 * outcome.x.maxCoeff() + 1.0;
  Vec x = outcome.x;
  for (long i = 0; i < n; ++i) {
    const double u0 = mu_utility(i, outcome.x, r, pop, graph, market);
    for (long q = 0; q < grid; ++q) {
      x(i) = hi * static_cast<double>(q) / static_cast<double>(grid - 1);
      if (mu_utility(i, x, r, pop, graph, market) - u0 > tol) return false;
    }
    x(i) = outcome.x(i);
  }
  return true;
}

}  // namespace mcs
