#include "mcs/stage1.hpp"

#include "mcs/numerics.hpp"

namespace mcs {

namespace {

void validate_inputs(const MuPopulation& pop, const SocialGraph& graph,
                     const MarketParams& market, const Stage2Config& cfg) {
  pop.validate();
  graph.validate();
  market.validate();
  cfg.validate(pop);
  check_dim("graph", pop.n(), graph.n());
  const Assumption1Report a1 = validate_assumption1(pop, graph);
  if (!a1.holds)
    throw Error("stage1: Assumption 1 violated, worst row ratio " +
                std::to_string(a1.worst_row_ratio));
}

}  // namespace

RewardSchedule discriminatory_reward(const MuPopulation& pop, const SocialGraph& graph,
                                     const MarketParams& market, const Stage2Config& cfg) {
  validate_inputs(pop, graph, market, cfg);
  const long n = pop.n();
  const Mat m = game_matrix(pop, graph, cfg);
  const Vec w = game_rhs(pop, market, Vec::Zero(n), cfg);
  const double mt = market.mu * market.t;
  const Vec ones = Vec::Ones(n);

  if (graph.symmetric) {
    // (2I + 2 mu t K) r = mu(s 1 - 2 t K w) - w, premultiplied by M.
    Mat lhs = 2.0 * m;
    lhs.diagonal().array() += 2.0 * mt;
    const Vec rhs = market.mu * market.s * (m * ones) - 2.0 * mt * w - m * w;
    return RewardSchedule::discriminatory(solve_dd({lhs, rhs}, cfg.solve_tol));
  }

  const DdSolver solver(m, cfg.solve_tol);
  const Vec v = solver.solve(w);
  const Vec q = market.mu * market.s * ones - 2.0 * mt * v - m.transpose() * v;
  Mat s_mat = m + m.transpose();
  s_mat.diagonal().array() += 2.0 * mt;
  const Vec z = solve_dd({s_mat, q}, cfg.solve_tol);
  return RewardSchedule::discriminatory(m * z);
}

RewardSchedule uniform_reward(const MuPopulation& pop, const SocialGraph& graph,
                              const MarketParams& market, const Stage2Config& cfg) {
  validate_inputs(pop, graph, market, cfg);
  const long n = pop.n();
  const DdSolver solver(game_matrix(pop, graph, cfg), cfg.solve_tol);
  const Vec w = game_rhs(pop, market, Vec::Zero(n), cfg);
  const Vec u = solver.solve(Vec::Ones(n));
  const Vec v = solver.solve(w);
  const double mt = market.mu * market.t;
  const double numer = market.mu * market.s * u.sum() - 2.0 * mt * u.dot(v) - v.sum();
  const double denom = 2.0 * mt * u.dot(u) + 2.0 * u.sum();
  if (!(denom > 0.0)) throw Error("uniform_reward: degenerate objective curvature");
  return RewardSchedule::uniform(numer / denom);
}

EquilibriumOutcome evaluate_mechanism(const MuPopulation& pop, const SocialGraph& graph,
                                      const MarketParams& market, const RewardSchedule& rewards,
                                      const Stage2Config& cfg) {
  return closed_form(pop, graph, market, rewards, cfg);
}

}  // namespace mcs
