#include "mcs/core.hpp"

#include <algorithm>
#include <cmath>

namespace mcs {

void MuPopulation::validate() const {
  check_dim("b", a.size(), b.size());
  if (a.size() == 0) throw Error("population is empty");
  if ((a.array() <= 0.0).any()) throw Error("population has non-positive a_i");
  if ((b.array() <= 0.0).any()) throw Error("population has non-positive b_i");
  if (quad_cost) {
    check_dim("quad_cost", a.size(), quad_cost->size());
    if ((quad_cost->array() < 0.0).any()) throw Error("population has negative quad_cost c_i");
  }
}

MuPopulation MuPopulation::homogeneous(long n, double a_val, double b_val) {
  MuPopulation pop;
  pop.a = Vec::Constant(n, a_val);
  pop.b = Vec::Constant(n, b_val);
  return pop;
}

void SocialGraph::validate() const {
  if (g.rows() != g.cols()) throw Error("social graph matrix is not square");
  for (long i = 0; i < g.rows(); ++i) {
    if (g(i, i) != 0.0) throw Error("social graph has non-zero diagonal at " + std::to_string(i));
    for (long j = 0; j < g.cols(); ++j)
      if (g(i, j) < 0.0)
        throw Error("social graph has negative tie at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
  }
  if (symmetric && g != g.transpose().eval())
    throw Error("social graph marked symmetric but matrix is not");
}

SocialGraph SocialGraph::empty(long n) { return {Mat::Zero(n, n), true}; }

SocialGraph SocialGraph::from_matrix(Mat g) {
  bool sym = (g == g.transpose().eval());
  return {std::move(g), sym};
}

void MarketParams::validate() const {
  if (!(mu >= 0.0) || !(s >= 0.0) || !(t >= 0.0))
    throw Error("market parameters mu, s, t must be non-negative");
}

Vec RewardSchedule::per_mu(long n) const {
  if (const auto* u = std::get_if<UniformReward>(&value)) return Vec::Constant(n, u->value);
  if (const auto* d = std::get_if<DiscriminatoryReward>(&value)) {
    check_dim("rewards", n, d->values.size());
    return d->values;
  }
  throw Error("type-indexed reward schedule does not resolve against MU indices");
}

double RewardSchedule::min_component() const {
  if (const auto* u = std::get_if<UniformReward>(&value)) return u->value;
  if (const auto* d = std::get_if<DiscriminatoryReward>(&value)) return d->values.minCoeff();
  return std::get<TypeIndexedReward>(value).values.minCoeff();
}

double mu_utility(long i, const Vec& x, const Vec& r, const MuPopulation& pop,
                  const SocialGraph& graph, const MarketParams& market) {
  const long n = pop.n();
  check_dim("x", n, x.size());
  check_dim("r", n, r.size());
  check_dim("graph", n, graph.n());
  if (i < 0 || i >= n) throw Error("mu_utility: index out of range");

  const double xi = x(i);
  const double social = graph.g.row(i).dot(x) * xi;
  const double cost = pop.quad_cost ? (*pop.quad_cost)(i)*xi * xi : market.c * xi;
  return pop.a(i) * xi - pop.b(i) * xi * xi + social + r(i) * xi - cost;
}

double csp_revenue(const Vec& x, const RewardSchedule& rewards, const MarketParams& market) {
  const Vec r = rewards.per_mu(x.size());
  KahanSum sum;
  for (long i = 0; i < x.size(); ++i)
    sum.add(market.mu * (market.s * x(i) - market.t * x(i) * x(i)) - r(i) * x(i));
  return sum.value();
}

Assumption1Report validate_assumption1(const MuPopulation& pop, const SocialGraph& graph) {
  const long n = pop.n();
  check_dim("graph", n, graph.n());
  Assumption1Report rep;
  rep.holds = true;
  for (long i = 0; i < n; ++i) {
    const double denom =
        2.0 * pop.b(i) + (pop.quad_cost ? 2.0 * (*pop.quad_cost)(i) : 0.0);
    const double ratio = graph.g.row(i).sum() / denom;
    if (ratio > rep.worst_row_ratio || rep.worst_row < 0) {
      rep.worst_row_ratio = ratio;
      rep.worst_row = i;
    }
    if (!(ratio < 1.0)) rep.holds = false;
  }
  return rep;
}

}  // namespace mcs
