// Incomplete-information game on the configuration model: MU types are
// (k, l) = (out-degree, in-degree), utilities are normalized to a = 1,
// b = 1/2, and the CSP maximizes expected revenue over type-indexed rewards.
// Provides the type-table equilibrium, expected revenue (general sum plus
// the simplified uniform form, cross-asserted), the Theorem-3 uniform
// optimum and the Theorem-4 discriminatory optimum via the 2x2 linear
// system in (r_bar, psi).
#pragma once

#include "mcs/graphs.hpp"

namespace mcs {

struct BayesianScenario {
  DegreeModel dm;
  MarketParams market;
  RewardSchedule rewards;  // Uniform or TypeIndexed

  void validate() const;
};

// Dense table over the type support D x D, indexed (k = out-degree row,
// l = in-degree column), with the two weighted means the Appendix-B system
// is written in.
struct TypeTable {
  Mat values;
  double r_bar = 0.0;    // sum_l Hbar(l) sum_k P(k) v(k,l)
  double psi = 0.0;      // sum_l sum_k (k/k_bar) H(l) P(k) v(k,l)
  bool interior = true;  // all values > 0 on positive-mass types
};

double type_mean_hbar_p(const Mat& values, const DegreeModel& dm);
double type_mean_k_weighted(const Mat& values, const DegreeModel& dm);
TypeTable make_type_table(Mat values, const DegreeModel& dm);

// Avg = (1 + r_bar - c) / (1 - gamma k_bar), the average participation of a
// randomly chosen neighbor.
double avg_neighbor_participation(const BayesianScenario& scn);

// Bayesian Nash participation x(k,l) = 1 + r(k,l) - c + gamma k Avg
// (unprojected; negative entries only flag the table non-interior).
TypeTable equilibrium_participation(const BayesianScenario& scn);

// Expected per-MU revenue sum_l sum_k H(l) P(k) ((mu s - r) x - mu t x^2).
// Under uniform rewards the simplified closed form
// (mu s + 1 - c) X - (1 - gamma k_bar + mu t + mu t gamma^2 sigma_k^2) X^2,
// X = (1 + r - c)/(1 - gamma k_bar), is evaluated too and must agree with
// the general sum within 1e-9.
double expected_revenue(const BayesianScenario& scn);

// Theorem 3: r* = c - 1 + (mu s + 1 - c)(1 - gamma k_bar)
//                  / (2 (1 - gamma k_bar + mu t + mu t gamma^2 sigma_k^2)).
double uniform_reward_t3(const DegreeModel& dm, const MarketParams& market);

// Theorem 4: optimal type-indexed reward. The first-order condition gives
// r(m,n) affine in the aggregates (r_bar, psi); their two consistency
// equations are assembled into a 2x2 linear system by numeric coefficient
// extraction and solved directly.
TypeTable discriminatory_reward_t4(const DegreeModel& dm, const MarketParams& market);

// Per-MU expected quantities used by the sweep layer.
struct BayesianEvaluation {
  double revenue = 0.0;
  double utility = 0.0;      // E[x^2 / 2]
  double reward_paid = 0.0;  // E[r x]
  bool interior = true;
};

BayesianEvaluation evaluate_bayesian(const BayesianScenario& scn);

}  // namespace mcs
