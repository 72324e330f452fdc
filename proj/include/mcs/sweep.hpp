// Seeded sweep harness: one row per (sweep value, seed), deterministic given
// the config, emitted as RFC-4180-style CSV with 17 significant digits.
#pragma once

#include "mcs/config.hpp"

namespace mcs {

struct SweepRow {
  std::optional<double> sweep_value;  // empty when the config has no sweep
  std::uint64_t seed = 0;
  std::optional<double> r_uniform;
  std::optional<double> revenue_uniform, revenue_disc;
  std::optional<double> total_utility_uniform, total_utility_disc;
  std::optional<double> total_reward_paid_uniform, total_reward_paid_disc;
  std::optional<bool> interior_uniform, interior_disc;
  std::optional<long> iterations_uniform, iterations_disc;
  std::optional<double> revenue_uniform_unprojected, revenue_disc_unprojected;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  long error_rows() const;
};

// One row per (sweep value, seed) in grid-major order. Solver errors abort
// only their row, recorded in the error column.
SweepResult run_scenario(const ScenarioConfig& cfg);

extern const char* const kSweepCsvHeader;
std::string to_csv(const SweepResult& res);
void emit_csv(const SweepResult& res, const std::string& path);

// Deterministic %.17g rendering shared by all CSV writers.
std::string format_double(double v);

}  // namespace mcs
