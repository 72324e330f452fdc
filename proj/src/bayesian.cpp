#include "mcs/bayesian.hpp"

#include <cmath>

namespace mcs {

namespace {

void check_network_regime(const DegreeModel& dm) {
  if (!(dm.gamma * dm.mean_in() < 1.0) || !(dm.gamma * dm.mean_out() < 1.0))
    throw Error("bayesian: gamma * k_bar >= 1, no unique equilibrium");
}

Mat resolve_reward_table(const RewardSchedule& rewards, const DegreeModel& dm) {
  const long size = dm.k_max + 1;
  if (const auto* u = std::get_if<UniformReward>(&rewards.value))
    return Mat::Constant(size, size, u->value);
  if (const auto* t = std::get_if<TypeIndexedReward>(&rewards.value)) {
    if (t->values.rows() != size || t->values.cols() != size)
      throw DimensionError("reward table", size, t->values.rows());
    return t->values;
  }
  throw Error("bayesian: reward schedule must be uniform or type-indexed");
}

}  // namespace

void BayesianScenario::validate() const {
  dm.validate();
  market.validate();
  check_network_regime(dm);
  resolve_reward_table(rewards, dm);
}

double type_mean_hbar_p(const Mat& values, const DegreeModel& dm) {
  const Vec hbar = neighbor_in_degree_dist(dm);
  KahanSum sum;
  for (long l = 0; l <= dm.k_max; ++l) {
    if (hbar(l) == 0.0) continue;
    for (long k = 0; k <= dm.k_max; ++k) sum.add(hbar(l) * dm.p_out(k) * values(k, l));
  }
  return sum.value();
}

double type_mean_k_weighted(const Mat& values, const DegreeModel& dm) {
  const double k_bar = dm.mean_out();
  if (k_bar <= 0.0) throw Error("degenerate out-degree distribution (mean 0)");
  KahanSum sum;
  for (long l = 0; l <= dm.k_max; ++l) {
    if (dm.h_in(l) == 0.0) continue;
    for (long k = 1; k <= dm.k_max; ++k)
      sum.add(static_cast<double>(k) / k_bar * dm.h_in(l) * dm.p_out(k) * values(k, l));
  }
  return sum.value();
}

TypeTable make_type_table(Mat values, const DegreeModel& dm) {
  TypeTable table;
  table.r_bar = type_mean_hbar_p(values, dm);
  table.psi = type_mean_k_weighted(values, dm);
  table.interior = true;
  for (long k = 0; k <= dm.k_max && table.interior; ++k)
    for (long l = 0; l <= dm.k_max; ++l)
      if (dm.p_out(k) > 0.0 && dm.h_in(l) > 0.0 && !(values(k, l) > 0.0)) {
        table.interior = false;
        break;
      }
  table.values = std::move(values);
  return table;
}

double avg_neighbor_participation(const BayesianScenario& scn) {
  scn.validate();
  const double k_bar = scn.dm.mean_out();
  double r_bar;
  if (const auto* u = std::get_if<UniformReward>(&scn.rewards.value))
    r_bar = u->value;
  else
    r_bar = type_mean_hbar_p(resolve_reward_table(scn.rewards, scn.dm), scn.dm);
  return (1.0 + r_bar - scn.market.c) / (1.0 - scn.dm.gamma * k_bar);
}

TypeTable equilibrium_participation(const BayesianScenario& scn) {
  scn.validate();
  const Mat r = resolve_reward_table(scn.rewards, scn.dm);
  const double avg = avg_neighbor_participation(scn);
  const long size = scn.dm.k_max + 1;
  Mat x(size, size);
  for (long k = 0; k < size; ++k)
    for (long l = 0; l < size; ++l)
      x(k, l) = 1.0 + r(k, l) - scn.market.c + scn.dm.gamma * static_cast<double>(k) * avg;
  return make_type_table(std::move(x), scn.dm);
}

double expected_revenue(const BayesianScenario& scn) {
  scn.validate();
  const Mat r = resolve_reward_table(scn.rewards, scn.dm);
  const TypeTable x = equilibrium_participation(scn);
  const MarketParams& mk = scn.market;

  KahanSum sum;
  for (long l = 0; l <= scn.dm.k_max; ++l) {
    if (scn.dm.h_in(l) == 0.0) continue;
    for (long k = 0; k <= scn.dm.k_max; ++k) {
      const double weight = scn.dm.h_in(l) * scn.dm.p_out(k);
      if (weight == 0.0) continue;
      const double xv = x.values(k, l);
      sum.add(weight * ((mk.mu * mk.s - r(k, l)) * xv - mk.mu * mk.t * xv * xv));
    }
  }
  const double general = sum.value();

  if (const auto* u = std::get_if<UniformReward>(&scn.rewards.value)) {
    const double gk = scn.dm.gamma * scn.dm.mean_out();
    const double xbar = (1.0 + u->value - mk.c) / (1.0 - gk);
    const double curvature =
        1.0 - gk + mk.mu * mk.t +
        mk.mu * mk.t * scn.dm.gamma * scn.dm.gamma * scn.dm.var_out();
    const double simplified = (mk.mu * mk.s + 1.0 - mk.c) * xbar - curvature * xbar * xbar;
    if (std::abs(general - simplified) > 1e-9)
      throw NumericsError("expected_revenue: general sum " + std::to_string(general) +
                          " disagrees with simplified form " + std::to_string(simplified));
  }
  return general;
}

double uniform_reward_t3(const DegreeModel& dm, const MarketParams& market) {
  dm.validate();
  market.validate();
  check_network_regime(dm);
  const double gk = dm.gamma * dm.mean_out();
  const double curvature =
      1.0 - gk + market.mu * market.t + market.mu * market.t * dm.gamma * dm.gamma * dm.var_out();
  return market.c - 1.0 +
         (market.mu * market.s + 1.0 - market.c) * (1.0 - gk) / (2.0 * curvature);
}

namespace {

// First-order condition of the expected revenue in the table entries: given
// the aggregates (r_bar, psi), the optimal entry is
//   r(m,n) = [mu s - (1 + 2 mu t)(1 - c + gamma m A) + gamma n S / (k_bar (1 - gamma k_bar))]
//            / (2 (1 + mu t)),
// with A = (1 + r_bar - c)/(1 - gamma k_bar) and
// S = k_bar (mu s - 2 mu t (1 - c)) - (1 + 2 mu t) k_bar psi
//     - 2 mu t gamma A (k_bar^2 + sigma_k^2).
Mat t4_table_at(const DegreeModel& dm, const MarketParams& mk, double r_bar, double psi) {
  const double k_bar = dm.mean_out();
  const double gk = dm.gamma * k_bar;
  const double mt = mk.mu * mk.t;
  const double a_avg = (1.0 + r_bar - mk.c) / (1.0 - gk);
  const double s_term = k_bar * (mk.mu * mk.s - 2.0 * mt * (1.0 - mk.c)) -
                        (1.0 + 2.0 * mt) * k_bar * psi -
                        2.0 * mt * dm.gamma * a_avg * (k_bar * k_bar + dm.var_out());
  const double n_coeff = dm.gamma * s_term / (k_bar * (1.0 - gk));

  const long size = dm.k_max + 1;
  Mat r(size, size);
  for (long m = 0; m < size; ++m) {
    const double m_part =
        mk.mu * mk.s -
        (1.0 + 2.0 * mt) * (1.0 - mk.c + dm.gamma * static_cast<double>(m) * a_avg);
    for (long n = 0; n < size; ++n)
      r(m, n) = (m_part + static_cast<double>(n) * n_coeff) / (2.0 * (1.0 + mt));
  }
  return r;
}

}  // namespace

TypeTable discriminatory_reward_t4(const DegreeModel& dm, const MarketParams& market) {
  dm.validate();
  market.validate();
  check_network_regime(dm);
  if (!(dm.mean_out() > 0.0))
    throw Error("discriminatory_reward_t4: k_bar must be positive");

  // The two aggregate consistency equations are affine in (r_bar, psi);
  // extract their coefficients by evaluation and solve the 2x2 system.
  auto eval = [&](double r_bar, double psi) {
    const Mat r = t4_table_at(dm, market, r_bar, psi);
    return std::pair<double, double>{type_mean_hbar_p(r, dm), type_mean_k_weighted(r, dm)};
  };
  const auto [f1_00, f2_00] = eval(0.0, 0.0);
  const auto [f1_10, f2_10] = eval(1.0, 0.0);
  const auto [f1_01, f2_01] = eval(0.0, 1.0);

  Eigen::Matrix2d sys;
  sys << 1.0 - (f1_10 - f1_00), -(f1_01 - f1_00),
      -(f2_10 - f2_00), 1.0 - (f2_01 - f2_00);
  const double det = sys.determinant();
  const double scale = sys.cwiseAbs().maxCoeff();
  if (std::abs(det) <= 1e-12 * scale * scale)
    throw Error("discriminatory_reward_t4: aggregate system is singular (det " +
                std::to_string(det) + ", scale " + std::to_string(scale) + ")");
  const Eigen::Vector2d sol = sys.inverse() * Eigen::Vector2d(f1_00, f2_00);

  TypeTable table = make_type_table(t4_table_at(dm, market, sol(0), sol(1)), dm);
  if (std::abs(table.r_bar - sol(0)) > 1e-8 || std::abs(table.psi - sol(1)) > 1e-8)
    throw NumericsError("discriminatory_reward_t4: aggregate self-consistency failed (r_bar " +
                        std::to_string(table.r_bar) + " vs " + std::to_string(sol(0)) +
                        ", psi " + std::to_string(table.psi) + " vs " + std::to_string(sol(1)) +
                        ")");
  return table;
}

BayesianEvaluation evaluate_bayesian(const BayesianScenario& scn) {
  const Mat r = resolve_reward_table(scn.rewards, scn.dm);
  const TypeTable x = equilibrium_participation(scn);
  BayesianEvaluation ev;
  ev.revenue = expected_revenue(scn);
  ev.interior = x.interior;
  KahanSum utility, paid;
  for (long l = 0; l <= scn.dm.k_max; ++l) {
    if (scn.dm.h_in(l) == 0.0) continue;
    for (long k = 0; k <= scn.dm.k_max; ++k) {
      const double weight = scn.dm.h_in(l) * scn.dm.p_out(k);
      if (weight == 0.0) continue;
      const double xv = x.values(k, l);
      utility.add(weight * 0.5 * xv * xv);
      paid.add(weight * r(k, l) * xv);
    }
  }
  ev.utility = utility.value();
  ev.reward_paid = paid.value();
  return ev;
}

}  // namespace mcs
