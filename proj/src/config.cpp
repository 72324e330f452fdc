#include "mcs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mcs {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + context);
}

double require_number(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + context);
  if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' in " + context + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

DistSpec parse_dist(const json& j, const std::string& context) {
  if (j.is_number()) {
    DistSpec d;
    d.kind = DistSpec::Kind::Const;
    d.value = j.get<double>();
    return d;
  }
  if (!j.is_object()) throw ConfigError(context + " must be a number or an object");
  reject_unknown_keys(j, {"dist", "value", "mean", "var", "lo", "hi"}, context);
  const std::string kind = j.value("dist", "const");
  DistSpec d;
  if (kind == "const") {
    d.kind = DistSpec::Kind::Const;
    d.value = require_number(j, "value", context);
  } else if (kind == "normal") {
    d.kind = DistSpec::Kind::Normal;
    d.mean = require_number(j, "mean", context);
    d.var = require_number(j, "var", context);
    if (d.var < 0.0) throw ConfigError(context + ": var must be >= 0");
  } else if (kind == "uniform") {
    d.kind = DistSpec::Kind::Uniform;
    d.lo = require_number(j, "lo", context);
    d.hi = require_number(j, "hi", context);
    if (!(d.lo <= d.hi)) throw ConfigError(context + ": need lo <= hi");
  } else {
    throw ConfigError(context + ": unknown dist '" + kind + "'");
  }
  return d;
}

MarketParams parse_market(const json& j) {
  reject_unknown_keys(j, {"mu", "s", "t", "c"}, "market");
  MarketParams mk;
  mk.mu = require_number(j, "mu", "market");
  mk.s = require_number(j, "s", "market");
  mk.t = require_number(j, "t", "market");
  mk.c = require_number(j, "c", "market");
  return mk;
}

PopulationSpec parse_population(const json& j) {
  reject_unknown_keys(j, {"n", "a", "b", "quad_cost"}, "population");
  PopulationSpec ps;
  if (!j.contains("n")) throw ConfigError("missing key 'n' in population");
  ps.n = j.at("n").get<long>();
  if (ps.n < 1) throw ConfigError("population.n must be >= 1");
  if (j.contains("a")) ps.a = parse_dist(j.at("a"), "population.a");
  if (j.contains("b")) ps.b = parse_dist(j.at("b"), "population.b");
  if (j.contains("quad_cost")) ps.quad_cost = parse_dist(j.at("quad_cost"), "population.quad_cost");
  return ps;
}

GraphGenSpec parse_graph(const json& j) {
  reject_unknown_keys(j, {"kind", "tie_mean", "tie_var", "enforce_assumption1", "rho_max", "path"},
                      "graph");
  GraphGenSpec gs;
  const std::string kind = j.value("kind", "normal_ties");
  if (kind == "normal_ties")
    gs.kind = GraphGenSpec::Kind::NormalTies;
  else if (kind == "chain")
    gs.kind = GraphGenSpec::Kind::Chain;
  else if (kind == "edge_list")
    gs.kind = GraphGenSpec::Kind::EdgeList;
  else
    throw ConfigError("graph: unknown kind '" + kind + "'");
  gs.tie_mean = number_or(j, "tie_mean", gs.tie_mean);
  const double tie_var = number_or(j, "tie_var", gs.tie_sigma * gs.tie_sigma);
  if (tie_var < 0.0) throw ConfigError("graph.tie_var must be >= 0");
  gs.tie_sigma = std::sqrt(tie_var);
  gs.enforce_assumption1 = j.value("enforce_assumption1", true);
  gs.rho_max = number_or(j, "rho_max", gs.rho_max);
  gs.edge_list_path = j.value("path", "");
  gs.validate();
  return gs;
}

DegreeModelSpec parse_degree_model(const json& j) {
  reject_unknown_keys(j, {"gamma", "family", "k_max", "mean", "var", "p_out", "h_in"},
                      "degree_model");
  DegreeModelSpec ds;
  ds.gamma = require_number(j, "gamma", "degree_model");
  if (j.contains("family")) {
    const std::string family = j.at("family").get<std::string>();
    if (family != "discretized_normal")
      throw ConfigError("degree_model: unknown family '" + family + "'");
    ds.has_family = true;
    ds.k_max = static_cast<int>(require_number(j, "k_max", "degree_model"));
    ds.mean = require_number(j, "mean", "degree_model");
    ds.var = require_number(j, "var", "degree_model");
  } else {
    if (!j.contains("p_out") || !j.contains("h_in"))
      throw ConfigError("degree_model needs either a family or explicit p_out/h_in pmfs");
    const auto read_pmf = [](const json& arr, const char* name) {
      if (!arr.is_array()) throw ConfigError(std::string("degree_model.") + name + " must be an array");
      Vec v(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i) v(i) = arr.at(i).get<double>();
      return v;
    };
    ds.p_out = read_pmf(j.at("p_out"), "p_out");
    ds.h_in = read_pmf(j.at("h_in"), "h_in");
  }
  return ds;
}

const std::set<std::string> kCompleteSweepVars = {"n",        "mu",      "s",     "t",     "c",
                                                  "tie_mean", "tie_var", "a_mean", "b_mean"};
const std::set<std::string> kBayesianSweepVars = {"n", "mu", "s", "t", "c", "gamma", "k_bar", "var"};

}  // namespace

double DistSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Const:
      return value;
    case Kind::Normal:
      return rng.normal(mean, std::sqrt(var));
    case Kind::Uniform:
      return rng.uniform(lo, hi);
  }
  throw Error("bad DistSpec kind");
}

double DistSpec::center() const {
  switch (kind) {
    case Kind::Const:
      return value;
    case Kind::Normal:
      return mean;
    case Kind::Uniform:
      return 0.5 * (lo + hi);
  }
  throw Error("bad DistSpec kind");
}

void DistSpec::set_center(double v) {
  switch (kind) {
    case Kind::Const:
      value = v;
      return;
    case Kind::Normal:
      mean = v;
      return;
    case Kind::Uniform: {
      const double half = 0.5 * (hi - lo);
      lo = v - half;
      hi = v + half;
      return;
    }
  }
  throw Error("bad DistSpec kind");
}

MuPopulation PopulationSpec::sample(Rng& rng) const {
  if (!a || !b) throw ConfigError("population needs 'a' and 'b' distributions");
  MuPopulation pop;
  pop.a.resize(n);
  pop.b.resize(n);
  const auto draw_positive = [&rng](const DistSpec& d, const char* what) {
    double v = d.sample(rng);
    for (int tries = 0; v <= 0.0 && tries < 1000; ++tries) v = d.sample(rng);
    if (v <= 0.0) throw Error(std::string(what) + ": cannot draw a positive value");
    return v;
  };
  for (long i = 0; i < n; ++i) pop.a(i) = draw_positive(*a, "population.a");
  for (long i = 0; i < n; ++i) pop.b(i) = draw_positive(*b, "population.b");
  if (quad_cost) {
    Vec qc(n);
    for (long i = 0; i < n; ++i) qc(i) = std::max(0.0, quad_cost->sample(rng));
    pop.quad_cost = std::move(qc);
  }
  pop.validate();
  return pop;
}

DegreeModel DegreeModelSpec::build() const {
  if (has_family) return DegreeModel::discretized_normal(k_max, mean, var, gamma);
  return DegreeModel::from_pmfs(p_out, h_in, gamma);
}

void ScenarioConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (seeds.empty()) throw ConfigError("seeds must be non-empty");
  market.validate();
  if (mode == Mode::CompleteInfo) {
    if (population.n < 1) throw ConfigError("population.n must be >= 1");
    if (!population.a || !population.b)
      throw ConfigError("complete mode needs population.a and population.b");
  } else {
    if (population.n < 1) throw ConfigError("population.n must be >= 1");
    degree_model.build();  // throws on inconsistency
  }
  if (sweep) {
    const auto& allowed = mode == Mode::CompleteInfo ? kCompleteSweepVars : kBayesianSweepVars;
    if (!allowed.count(sweep->variable))
      throw ConfigError("sweep variable '" + sweep->variable + "' is not a known config field");
    if (sweep->values.empty()) throw ConfigError("sweep.values must be non-empty");
    if ((sweep->variable == "k_bar" || sweep->variable == "var") && !degree_model.has_family)
      throw ConfigError("sweeping '" + sweep->variable +
                        "' requires the discretized_normal degree family");
  }
}

ScenarioConfig ScenarioConfig::with_sweep_value(double value) const {
  ScenarioConfig out = *this;
  out.sweep.reset();
  if (!sweep) return out;
  const std::string& var = sweep->variable;
  if (var == "n")
    out.population.n = static_cast<long>(value);
  else if (var == "mu")
    out.market.mu = value;
  else if (var == "s")
    out.market.s = value;
  else if (var == "t")
    out.market.t = value;
  else if (var == "c")
    out.market.c = value;
  else if (var == "tie_mean")
    out.graph.tie_mean = value;
  else if (var == "tie_var") {
    if (value < 0.0) throw ConfigError("sweep value for tie_var must be >= 0");
    out.graph.tie_sigma = std::sqrt(value);
  }
  else if (var == "a_mean")
    out.population.a->set_center(value);
  else if (var == "b_mean")
    out.population.b->set_center(value);
  else if (var == "gamma")
    out.degree_model.gamma = value;
  else if (var == "k_bar")
    out.degree_model.mean = value;
  else if (var == "var") {
    if (value < 0.0) throw ConfigError("sweep value for var must be >= 0");
    out.degree_model.var = value;
  }
  else
    throw ConfigError("sweep variable '" + var + "' is not a known config field");
  return out;
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(j,
                      {"mode", "epsilon", "seeds", "mechanism", "market", "population", "graph",
                       "degree_model", "sweep"},
                      "config root");

  ScenarioConfig cfg;
  const std::string mode = j.value("mode", "");
  if (mode == "complete")
    cfg.mode = Mode::CompleteInfo;
  else if (mode == "bayesian")
    cfg.mode = Mode::Bayesian;
  else
    throw ConfigError("config needs \"mode\": \"complete\" or \"bayesian\"");

  cfg.epsilon = number_or(j, "epsilon", cfg.epsilon);
  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array()) throw ConfigError("seeds must be an array");
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  const std::string mech = j.value("mechanism", "both");
  if (mech == "uniform")
    cfg.mechanism = Mechanism::Uniform;
  else if (mech == "disc")
    cfg.mechanism = Mechanism::Discriminatory;
  else if (mech == "both")
    cfg.mechanism = Mechanism::Both;
  else
    throw ConfigError("mechanism must be uniform|disc|both");

  if (!j.contains("market")) throw ConfigError("config needs a market section");
  cfg.market = parse_market(j.at("market"));
  if (j.contains("population")) cfg.population = parse_population(j.at("population"));
  if (j.contains("graph")) cfg.graph = parse_graph(j.at("graph"));
  if (cfg.mode == Mode::Bayesian) {
    if (!j.contains("degree_model")) throw ConfigError("bayesian mode needs a degree_model section");
    cfg.degree_model = parse_degree_model(j.at("degree_model"));
  } else if (j.contains("degree_model")) {
    throw ConfigError("degree_model is only valid in bayesian mode");
  }
  if (cfg.mode == Mode::CompleteInfo && !j.contains("graph"))
    throw ConfigError("complete mode needs a graph section");
  if (j.contains("sweep")) {
    reject_unknown_keys(j.at("sweep"), {"variable", "values"}, "sweep");
    SweepSpec sw;
    sw.variable = j.at("sweep").value("variable", "");
    if (!j.at("sweep").contains("values") || !j.at("sweep").at("values").is_array())
      throw ConfigError("sweep.values must be an array");
    for (const auto& v : j.at("sweep").at("values")) sw.values.push_back(v.get<double>());
    cfg.sweep = std::move(sw);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mcs
