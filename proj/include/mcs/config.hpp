// JSON scenario configs for the experiment harness. Parsing is fail-fast:
// unknown keys anywhere in the document are rejected so sweep-variable typos
// cannot silently no-op.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcs/bayesian.hpp"
#include "mcs/graphs.hpp"
#include "mcs/rng.hpp"

namespace mcs {

enum class Mode { CompleteInfo, Bayesian };
enum class Mechanism { Uniform, Discriminatory, Both };

// Scalar sampling spec for population draws.
struct DistSpec {
  enum class Kind { Const, Normal, Uniform };
  Kind kind = Kind::Const;
  double value = 0.0;            // Const
  double mean = 0.0, var = 0.0;  // Normal
  double lo = 0.0, hi = 0.0;     // Uniform

  double sample(Rng& rng) const;
  double center() const;         // value used by sweeps over *_mean
  void set_center(double v);
};

struct PopulationSpec {
  long n = 0;
  std::optional<DistSpec> a;
  std::optional<DistSpec> b;
  std::optional<DistSpec> quad_cost;

  // Draws a, then b (redrawn while <= 0), then quad_cost (clamped at 0).
  MuPopulation sample(Rng& rng) const;
};

struct DegreeModelSpec {
  double gamma = 0.0;
  bool has_family = false;  // discretized_normal(k_max, mean, var)
  int k_max = 0;
  double mean = 0.0;
  double var = 0.0;
  Vec p_out, h_in;  // explicit pmfs when !has_family

  DegreeModel build() const;
};

struct SweepSpec {
  std::string variable;
  std::vector<double> values;
};

struct ScenarioConfig {
  Mode mode = Mode::CompleteInfo;
  double epsilon = 1e-8;
  std::vector<std::uint64_t> seeds;
  Mechanism mechanism = Mechanism::Both;
  MarketParams market{};
  PopulationSpec population;
  GraphGenSpec graph;
  DegreeModelSpec degree_model;
  std::optional<SweepSpec> sweep;

  void validate() const;
  // Returns a copy with the sweep variable set to `value`.
  ScenarioConfig with_sweep_value(double value) const;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
};

// Independent seed streams derived from one user seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mcs
