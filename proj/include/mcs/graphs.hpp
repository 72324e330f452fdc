// Social-graph and degree-model generators for the experiment setups:
// symmetric normal ties, the adjacent-index chain, and the directed
// configuration model behind the Bayesian game. All generators are
// deterministic functions of (inputs, seed).
#pragma once

#include <cstdint>
#include <string>

#include "mcs/core.hpp"

namespace mcs {

// Degree model of the Bayesian game: out-degree pmf P (susceptibility, row
// count of G), in-degree pmf H (influence, column count) on {0..k_max}, and
// the social strength gamma.
struct DegreeModel {
  int k_max = 0;
  Vec p_out;  // size k_max + 1
  Vec h_in;   // size k_max + 1
  double gamma = 0.0;

  void validate() const;
  double mean_out() const;  // k_bar
  double mean_in() const;
  double var_out() const;  // sigma_k^2
  double var_in() const;   // sigma_l^2

  static DegreeModel from_pmfs(Vec p, Vec h, double gamma);
  static DegreeModel point_mass(int k, double gamma);
  // P = H proportional to exp(-(k-mean)^2/(2 var)) on {0..k_max}.
  static DegreeModel discretized_normal(int k_max, double mean, double var, double gamma);
  static DegreeModel uniform_range(int lo, int hi, double gamma);
};

// Size-biased in-degree distribution of a randomly chosen neighbor:
// Hbar(l) = H(l) l / sum_l' H(l') l'.
Vec neighbor_in_degree_dist(const DegreeModel& dm);

struct GraphGenDiagnostics {
  double applied_scale = 1.0;  // Assumption-1 rescale factor
  long clamped_draws = 0;      // negative normal draws clamped to 0
};

// Symmetric ties g_ij = g_ji ~ N(mu_g, sigma_g^2) clamped at 0; if enforce,
// the matrix is rescaled so max_i sum_j g_ij / (2 b_i) equals rho_max.
SocialGraph gen_normal_ties(long n, double mu_g, double sigma_g, std::uint64_t seed,
                            const MuPopulation& pop, bool enforce, double rho_max = 0.95,
                            GraphGenDiagnostics* diag = nullptr);

// Chain where only index-adjacent MUs are tied: for 1-based i in [1, n-1],
// g_{i,i+1} = g_{i+1,i} = 0.2 (0.5 - (0.5 - (i-1)/n)^2).
SocialGraph gen_chain(long n);

struct ConfigModelDiagnostics {
  long balance_redraws = 0;
  long rematch_rounds = 0;
  long edge_swaps = 0;
  long edges = 0;
};

// Directed configuration model: draws out-degrees from P and in-degrees from
// H, balances stub totals by redrawing nodes on the smaller side, matches
// stubs uniformly, and resolves self-loops/multi-edges by rematch rounds and
// degree-preserving edge swaps. g_ij = gamma where j influences i.
SocialGraph sample_configuration_network(const DegreeModel& dm, long n, std::uint64_t seed,
                                         ConfigModelDiagnostics* diag = nullptr);

struct GraphGenSpec {
  enum class Kind { NormalTies, Chain, EdgeList };
  Kind kind = Kind::NormalTies;
  double tie_mean = 0.05;
  double tie_sigma = 1.0;
  bool enforce_assumption1 = true;
  double rho_max = 0.95;
  std::string edge_list_path;

  void validate() const;
};

SocialGraph gen_graph(const GraphGenSpec& spec, const MuPopulation& pop, std::uint64_t seed,
                      GraphGenDiagnostics* diag = nullptr);

// Plain-text edge list: '#' comments, then a line with the node count n,
// then one directed edge "src dst weight" per line meaning src influences
// dst (g_{dst,src} = weight), 0-based.
SocialGraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const SocialGraph& graph);

}  // namespace mcs
