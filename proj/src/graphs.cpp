#include "mcs/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mcs/rng.hpp"

namespace mcs {

namespace {

double pmf_mean(const Vec& p) {
  double m = 0.0;
  for (long k = 0; k < p.size(); ++k) m += p(k) * static_cast<double>(k);
  return m;
}

double pmf_var(const Vec& p) {
  const double m = pmf_mean(p);
  double v = 0.0;
  for (long k = 0; k < p.size(); ++k) v += p(k) * (k - m) * (k - m);
  return v;
}

}  // namespace

void DegreeModel::validate() const {
  if (k_max < 0) throw Error("degree model: k_max must be >= 0");
  check_dim("p_out", k_max + 1, p_out.size());
  check_dim("h_in", k_max + 1, h_in.size());
  if ((p_out.array() < 0.0).any() || (h_in.array() < 0.0).any())
    throw Error("degree model: pmf entries must be non-negative");
  if (std::abs(p_out.sum() - 1.0) > 1e-12 || std::abs(h_in.sum() - 1.0) > 1e-12)
    throw Error("degree model: pmfs must sum to 1 within 1e-12");
  if (std::abs(mean_out() - mean_in()) > 1e-9)
    throw Error("degree model: mean out-degree " + std::to_string(mean_out()) +
                " != mean in-degree " + std::to_string(mean_in()));
  if (gamma < 0.0) throw Error("degree model: gamma must be >= 0");
  if (!(gamma * k_max < 1.0))
    throw Error("degree model: gamma * k_max = " + std::to_string(gamma * k_max) +
                " violates the uniqueness condition (< 1)");
}

double DegreeModel::mean_out() const { return pmf_mean(p_out); }
double DegreeModel::mean_in() const { return pmf_mean(h_in); }
double DegreeModel::var_out() const { return pmf_var(p_out); }
double DegreeModel::var_in() const { return pmf_var(h_in); }

DegreeModel DegreeModel::from_pmfs(Vec p, Vec h, double gamma) {
  const long size = std::max(p.size(), h.size());
  if (p.size() < size) {
    Vec padded = Vec::Zero(size);
    padded.head(p.size()) = p;
    p = padded;
  }
  if (h.size() < size) {
    Vec padded = Vec::Zero(size);
    padded.head(h.size()) = h;
    h = padded;
  }
  DegreeModel dm;
  dm.k_max = static_cast<int>(size - 1);
  dm.p_out = std::move(p);
  dm.h_in = std::move(h);
  dm.gamma = gamma;
  dm.validate();
  return dm;
}

DegreeModel DegreeModel::point_mass(int k, double gamma) {
  Vec p = Vec::Zero(k + 1);
  p(k) = 1.0;
  return from_pmfs(p, p, gamma);
}

DegreeModel DegreeModel::discretized_normal(int k_max, double mean, double var, double gamma) {
  if (k_max < 0) throw Error("degree model: k_max must be >= 0");
  Vec w(k_max + 1);
  if (var > 0.0) {
    for (int k = 0; k <= k_max; ++k) w(k) = std::exp(-(k - mean) * (k - mean) / (2.0 * var));
  } else {
    w.setZero();
    const int k0 = std::clamp(static_cast<int>(std::lround(mean)), 0, k_max);
    w(k0) = 1.0;
  }
  w /= w.sum();
  return from_pmfs(w, w, gamma);
}

DegreeModel DegreeModel::uniform_range(int lo, int hi, double gamma) {
  if (lo < 0 || hi < lo) throw Error("degree model: bad uniform range");
  Vec p = Vec::Zero(hi + 1);
  for (int k = lo; k <= hi; ++k) p(k) = 1.0 / (hi - lo + 1);
  return from_pmfs(p, p, gamma);
}

Vec neighbor_in_degree_dist(const DegreeModel& dm) {
  const double mean = dm.mean_in();
  if (mean <= 0.0) throw Error("degenerate in-degree distribution (mean 0)");
  Vec hbar(dm.h_in.size());
  for (long l = 0; l < dm.h_in.size(); ++l) hbar(l) = dm.h_in(l) * static_cast<double>(l) / mean;
  return hbar;
}

SocialGraph gen_normal_ties(long n, double mu_g, double sigma_g, std::uint64_t seed,
                            const MuPopulation& pop, bool enforce, double rho_max,
                            GraphGenDiagnostics* diag) {
  if (n < 1) throw Error("gen_normal_ties: n must be >= 1");
  if (sigma_g < 0.0) throw Error("gen_normal_ties: sigma_g must be >= 0");
  check_dim("pop", n, pop.n());
  if (enforce && !(rho_max > 0.0 && rho_max < 1.0))
    throw Error("gen_normal_ties: rho_max must lie in (0,1)");

  GraphGenDiagnostics local;
  Rng rng(seed);
  Mat g = Mat::Zero(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) {
      double w = rng.normal(mu_g, sigma_g);
      if (w < 0.0) {
        w = 0.0;
        ++local.clamped_draws;
      }
      g(i, j) = g(j, i) = w;
    }

  SocialGraph graph{std::move(g), true};
  if (enforce) {
    const double ratio = validate_assumption1(pop, graph).worst_row_ratio;
    if (ratio > 0.0) {
      const double scale = rho_max / ratio;
      graph.g *= scale;
      local.applied_scale = scale;
    }
  }
  if (diag) *diag = local;
  return graph;
}

SocialGraph gen_chain(long n) {
  if (n < 2) throw Error("gen_chain: n must be >= 2");
  Mat g = Mat::Zero(n, n);
  for (long e = 0; e + 1 < n; ++e) {
    const double d = 0.5 - static_cast<double>(e) / static_cast<double>(n);
    const double w = 0.2 * (0.5 - d * d);
    g(e, e + 1) = g(e + 1, e) = w;
  }
  return {std::move(g), true};
}

namespace {

// Inverse-CDF sampling with a linear scan; supports are small.
long sample_pmf(const Vec& pmf, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (long k = 0; k < pmf.size(); ++k) {
    acc += pmf(k);
    if (u < acc) return k;
  }
  for (long k = pmf.size() - 1; k >= 0; --k)
    if (pmf(k) > 0.0) return k;
  return 0;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.integer(i)]);
}

}  // namespace

SocialGraph sample_configuration_network(const DegreeModel& dm, long n, std::uint64_t seed,
                                         ConfigModelDiagnostics* diag) {
  dm.validate();
  if (n < 1) throw Error("configuration model: n must be >= 1");
  ConfigModelDiagnostics local;
  Rng rng(seed);

  std::vector<long> out_deg(n), in_deg(n);
  long sum_out = 0, sum_in = 0;
  for (long i = 0; i < n; ++i) sum_out += out_deg[i] = sample_pmf(dm.p_out, rng);
  for (long i = 0; i < n; ++i) sum_in += in_deg[i] = sample_pmf(dm.h_in, rng);

  // Balance stub totals by redrawing nodes on the smaller side.
  const long balance_bound = 1000 * n;
  while (sum_out != sum_in) {
    if (local.balance_redraws++ >= balance_bound)
      throw Error("configuration model: stub balancing exceeded retry bound (out " +
                  std::to_string(sum_out) + ", in " + std::to_string(sum_in) + ")");
    const long j = static_cast<long>(rng.integer(static_cast<std::uint64_t>(n)));
    if (sum_out < sum_in) {
      sum_out -= out_deg[j];
      sum_out += out_deg[j] = sample_pmf(dm.p_out, rng);
    } else {
      sum_in -= in_deg[j];
      sum_in += in_deg[j] = sample_pmf(dm.h_in, rng);
    }
  }

  // Node i's out-stubs pair with influencers; an edge (i, j) puts g_ij = gamma.
  std::vector<long> row_stubs, col_stubs;
  row_stubs.reserve(sum_out);
  col_stubs.reserve(sum_in);
  for (long i = 0; i < n; ++i) row_stubs.insert(row_stubs.end(), out_deg[i], i);
  for (long j = 0; j < n; ++j) col_stubs.insert(col_stubs.end(), in_deg[j], j);
  shuffle_vec(col_stubs, rng);

  auto key = [n](long i, long j) { return i * n + j; };
  std::unordered_set<long> present;
  present.reserve(static_cast<std::size_t>(sum_out) * 2);
  std::vector<std::pair<long, long>> edges;
  edges.reserve(sum_out);

  auto try_add = [&](long i, long j) {
    if (i == j || present.count(key(i, j))) return false;
    present.insert(key(i, j));
    edges.emplace_back(i, j);
    return true;
  };

  std::vector<long> pend_rows, pend_cols;
  for (std::size_t s = 0; s < row_stubs.size(); ++s)
    if (!try_add(row_stubs[s], col_stubs[s])) {
      pend_rows.push_back(row_stubs[s]);
      pend_cols.push_back(col_stubs[s]);
    }

  for (int round = 0; round < 100 && !pend_rows.empty(); ++round) {
    ++local.rematch_rounds;
    shuffle_vec(pend_cols, rng);
    std::vector<long> next_rows, next_cols;
    for (std::size_t s = 0; s < pend_rows.size(); ++s)
      if (!try_add(pend_rows[s], pend_cols[s])) {
        next_rows.push_back(pend_rows[s]);
        next_cols.push_back(pend_cols[s]);
      }
    pend_rows.swap(next_rows);
    pend_cols.swap(next_cols);
  }

  // Degree-preserving rescue: splice a stuck stub pair into a random
  // committed edge (u, v) as (i, v) + (u, j).
  long swap_budget = 1000 + 100 * static_cast<long>(pend_rows.size());
  for (std::size_t s = 0; s < pend_rows.size(); ++s) {
    const long i = pend_rows[s], j = pend_cols[s];
    bool placed = false;
    while (swap_budget-- > 0 && !placed) {
      if (edges.empty()) break;
      const std::size_t e = rng.integer(edges.size());
      const auto [u, v] = edges[e];
      if (i == v || u == j || present.count(key(i, v)) || present.count(key(u, j))) continue;
      present.erase(key(u, v));
      present.insert(key(i, v));
      present.insert(key(u, j));
      edges[e] = {i, v};
      edges.emplace_back(u, j);
      ++local.edge_swaps;
      placed = true;
    }
    if (!placed)
      throw Error("configuration model: rematch retry bound exceeded with " +
                  std::to_string(pend_rows.size() - s) + " unplaced stub pairs");
  }

  Mat g = Mat::Zero(n, n);
  for (const auto& [i, j] : edges) g(i, j) = dm.gamma;
  local.edges = static_cast<long>(edges.size());
  if (diag) *diag = local;
  return SocialGraph::from_matrix(std::move(g));
}

void GraphGenSpec::validate() const {
  if (!(rho_max > 0.0 && rho_max < 1.0)) throw Error("graph spec: rho_max must lie in (0,1)");
  if (tie_sigma < 0.0) throw Error("graph spec: tie_sigma must be >= 0");
  if (kind == Kind::EdgeList && edge_list_path.empty())
    throw Error("graph spec: edge_list kind requires a path");
}

SocialGraph gen_graph(const GraphGenSpec& spec, const MuPopulation& pop, std::uint64_t seed,
                      GraphGenDiagnostics* diag) {
  spec.validate();
  switch (spec.kind) {
    case GraphGenSpec::Kind::NormalTies:
      return gen_normal_ties(pop.n(), spec.tie_mean, spec.tie_sigma, seed, pop,
                             spec.enforce_assumption1, spec.rho_max, diag);
    case GraphGenSpec::Kind::Chain:
      return gen_chain(pop.n());
    case GraphGenSpec::Kind::EdgeList: {
      SocialGraph graph = load_edge_list(spec.edge_list_path);
      check_dim("graph", pop.n(), graph.n());
      return graph;
    }
  }
  throw Error("graph spec: unknown kind");
}

SocialGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  std::string line;
  long n = -1;
  Mat g;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    if (n < 0) {
      if (ss >> n) {
        if (n < 1) throw Error("edge list '" + path + "': node count must be >= 1");
        g = Mat::Zero(n, n);
      }
      continue;
    }
    long src, dst;
    double w;
    if (!(ss >> src)) continue;  // blank line
    if (!(ss >> dst >> w))
      throw Error("edge list '" + path + "' line " + std::to_string(lineno) +
                  ": expected 'src dst weight'");
    if (src < 0 || src >= n || dst < 0 || dst >= n)
      throw Error("edge list '" + path + "' line " + std::to_string(lineno) +
                  ": index out of range for n = " + std::to_string(n));
    if (w < 0.0)
      throw Error("edge list '" + path + "' line " + std::to_string(lineno) +
                  ": negative weight");
    if (src == dst && w != 0.0)
      throw Error("edge list '" + path + "' line " + std::to_string(lineno) + ": self-loop");
    g(dst, src) = w;
  }
  if (n < 0) throw Error("edge list '" + path + "': missing node count line");
  return SocialGraph::from_matrix(std::move(g));
}

void save_edge_list(const std::string& path, const SocialGraph& graph) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write edge list '" + path + "'");
  out << "# directed social influence edges: src dst weight (src influences dst)\n";
  out << graph.n() << "\n";
  char buf[64];
  for (long i = 0; i < graph.n(); ++i)
    for (long j = 0; j < graph.n(); ++j)
      if (graph.g(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", graph.g(i, j));
        out << j << ' ' << i << ' ' << buf << '\n';
      }
  if (!out) throw Error("write failed for edge list '" + path + "'");
}

}  // namespace mcs
