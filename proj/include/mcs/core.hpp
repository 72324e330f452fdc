// Domain types of the crowdsensing Stackelberg game: MU population, social
// graph, market parameters, reward schedules, equilibrium outcomes, plus the
// payoff evaluations (Eq. 2/3) and the uniqueness condition (Assumption 1).
#pragma once

#include <optional>
#include <variant>

#include "mcs/common.hpp"

namespace mcs {

// Mobile users: utility a_i x - b_i x^2 + sum_j g_ij x_i x_j + r_i x_i minus
// a cost term. Cost is c x_i (uniform linear, market.c) unless quad_cost is
// present, in which case it is c_i x_i^2 (heterogeneous quadratic).
struct MuPopulation {
  Vec a;
  Vec b;
  std::optional<Vec> quad_cost;

  long n() const { return a.size(); }
  void validate() const;

  static MuPopulation homogeneous(long n, double a_val, double b_val);
};

struct SocialGraph {
  Mat g;           // g(i, j): influence of MU j on MU i
  bool symmetric;  // set by generators; checked in validate()

  long n() const { return g.rows(); }
  void validate() const;

  static SocialGraph empty(long n);
  static SocialGraph from_matrix(Mat g);  // detects symmetry
};

struct MarketParams {
  double mu;  // unit revenue weight
  double s;   // linear sensing value
  double t;   // quadratic congestion discount
  double c;   // uniform linear participation cost

  void validate() const;
};

struct UniformReward {
  double value = 0.0;
};

struct DiscriminatoryReward {
  Vec values;
};

// Reward indexed by Bayesian type (k = out-degree row, l = in-degree column)
// over the full support {0..k_max} x {0..k_max}.
struct TypeIndexedReward {
  Mat values;
};

struct RewardSchedule {
  std::variant<UniformReward, DiscriminatoryReward, TypeIndexedReward> value;

  static RewardSchedule uniform(double r) { return {UniformReward{r}}; }
  static RewardSchedule discriminatory(Vec r) { return {DiscriminatoryReward{std::move(r)}}; }
  static RewardSchedule type_indexed(Mat r) { return {TypeIndexedReward{std::move(r)}}; }

  bool is_uniform() const { return std::holds_alternative<UniformReward>(value); }
  bool is_discriminatory() const { return std::holds_alternative<DiscriminatoryReward>(value); }
  bool is_type_indexed() const { return std::holds_alternative<TypeIndexedReward>(value); }

  // Per-MU reward vector of length n; type-indexed schedules do not resolve
  // against MU indices and throw.
  Vec per_mu(long n) const;
  double min_component() const;
};

struct SolveDiagnostics {
  long iterations = 0;
  double residual_inf_norm = 0.0;
  bool interior = true;
  bool projected_fallback = false;         // closed form fell back to dynamics
  double max_contraction_ratio = 0.0;      // sup of successive-difference ratios
  bool negative_reward = false;            // some closed-form reward < 0
  std::optional<double> unprojected_revenue;  // revenue at the raw linear solve
};

struct EquilibriumOutcome {
  Vec x;
  RewardSchedule rewards;
  Vec utilities;
  double revenue = 0.0;
  SolveDiagnostics diagnostics;
};

// Eq. (2) utility of MU i at profile x.
double mu_utility(long i, const Vec& x, const Vec& r, const MuPopulation& pop,
                  const SocialGraph& graph, const MarketParams& market);

// Eq. (3) CSP revenue at profile x.
double csp_revenue(const Vec& x, const RewardSchedule& rewards, const MarketParams& market);

struct Assumption1Report {
  bool holds = false;
  double worst_row_ratio = 0.0;
  long worst_row = -1;
};

// Assumption 1: sum_j g_ij / (2 b_i) < 1 for every i; the denominator is
// 2 b_i + 2 c_i under the heterogeneous quadratic cost (Assumption R1).
Assumption1Report validate_assumption1(const MuPopulation& pop, const SocialGraph& graph);

}  // namespace mcs
