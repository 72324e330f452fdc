// Stage II of the Stackelberg game: the MU participation equilibrium, by
// synchronous best-response dynamics (Algorithm 1) and by the linear closed
// form x = K (a + r - c 1), K = (B - G)^{-1}, with the heterogeneous
// quadratic-cost variant K' = (B + C - G)^{-1}, x = K'(a + r).
#pragma once

#include "mcs/core.hpp"

namespace mcs {

enum class CostModel { LinearUniform, QuadraticHeterogeneous };

struct Stage2Config {
  double epsilon = 1e-8;  // Algorithm-1 precision threshold on the l1 step
  long max_iter = 1000000;
  CostModel cost_model = CostModel::LinearUniform;
  double solve_tol = 1e-10;

  // epsilon/max_iter sanity plus agreement between cost_model and the
  // presence of pop.quad_cost.
  void validate(const MuPopulation& pop) const;
};

// System matrix of the equilibrium condition: B - G, or B + C - G under
// quadratic cost, with B = diag(2 b_i), C = diag(2 c_i).
Mat game_matrix(const MuPopulation& pop, const SocialGraph& graph, const Stage2Config& cfg);

// Right-hand side a + r - c 1 (or a + r under quadratic cost).
Vec game_rhs(const MuPopulation& pop, const MarketParams& market, const Vec& r,
             const Stage2Config& cfg);

// Eq. (4): max{0, (r_i - c + a_i)/(2 b_i) + sum_j g_ij x_j / (2 b_i)}, with
// denominators 2 b_i + 2 c_i and no -c under quadratic cost.
double best_response(long i, const Vec& x, double r_i, const MuPopulation& pop,
                     const SocialGraph& graph, const MarketParams& market,
                     const Stage2Config& cfg);

// Algorithm 1: synchronous best-response iteration from x0 (default 0) until
// the l1 step falls below epsilon.
EquilibriumOutcome dynamics(const MuPopulation& pop, const SocialGraph& graph,
                            const MarketParams& market, const RewardSchedule& rewards,
                            const Stage2Config& cfg, const Vec* x0 = nullptr);

// Linear solve of the interior equilibrium; falls back to projected dynamics
// (and flags the outcome non-interior) when the solve leaves the positive
// orthant.
EquilibriumOutcome closed_form(const MuPopulation& pop, const SocialGraph& graph,
                               const MarketParams& market, const RewardSchedule& rewards,
                               const Stage2Config& cfg);

// Deviation scan: for each MU, x_i runs over `grid` points on
// [0, 2 max(x*) + 1]; true iff no unilateral deviation improves utility by
// more than tol.
bool verify_nash(const EquilibriumOutcome& outcome, const MuPopulation& pop,
                 const SocialGraph& graph, const MarketParams& market, const Stage2Config& cfg,
                 long grid, double tol);

}  // namespace mcs
