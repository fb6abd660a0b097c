#include "mixedlab/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mixedlab::harness {

namespace {

using nlohmann::json;

std::vector<double> number_list(const json& v, const std::string& key) {
  std::vector<double> out;
  auto take = [&](const json& x) {
    if (!x.is_number()) throw ConfigError("'" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  };
  if (v.is_array()) {
    for (const auto& x : v) take(x);
  } else {
    take(v);
  }
  return out;
}

std::string string_field(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

ElementCombo default_element(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Biot:
      return ElementCombo::P2_RT0_P0_P0;
    case ProblemKind::Herrmann:
      return ElementCombo::P2_P1;
    default:
      return ElementCombo::RT0_P0;
  }
}

}  // namespace

std::optional<double> ExperimentConfig::tolerance(const std::string& key) const {
  auto it = tolerances.find(key);
  if (it == tolerances.end()) return std::nullopt;
  return it->second;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {"problem", "element", "precond", "n",      "K",
                                              "alpha",   "lambda",  "c",       "mu",     "tau",
                                              "output",  "tolerances", "facet_size", "b3_form",
                                              "workers", "timing",  "reduction"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (!doc.contains("problem")) throw ConfigError("config needs 'problem'");
    cfg.problem = parse_problem_kind(string_field(doc["problem"], "problem"));
    cfg.element = doc.contains("element") ? parse_element_combo(string_field(doc["element"], "element"))
                                          : default_element(cfg.problem);
    if (!doc.contains("precond")) throw ConfigError("config needs 'precond'");
    cfg.precond = parse_precond_kind(string_field(doc["precond"], "precond"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (doc.contains("n")) {
    cfg.n.clear();
    for (double v : number_list(doc["n"], "n")) {
      if (v != static_cast<int>(v)) throw ConfigError("'n' entries must be integers");
      cfg.n.push_back(static_cast<int>(v));
    }
  }
  const std::pair<const char*, std::vector<double>*> grids[] = {
      {"K", &cfg.K}, {"alpha", &cfg.alpha}, {"lambda", &cfg.lambda},
      {"c", &cfg.c}, {"mu", &cfg.mu},       {"tau", &cfg.tau}};
  for (const auto& [key, dst] : grids) {
    if (doc.contains(key)) *dst = number_list(doc[key], key);
  }

  if (doc.contains("output")) cfg.output = string_field(doc["output"], "output");
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
    static const std::set<std::string> keys = {"cond_max", "h_variation", "minres_growth"};
    for (const auto& [key, value] : t.items()) {
      if (!keys.count(key)) throw ConfigError("unknown tolerance '" + key + "'");
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw ConfigError("tolerance '" + key + "' must be a positive number");
      }
      cfg.tolerances[key] = value.get<double>();
    }
  }
  if (doc.contains("facet_size")) {
    const std::string s = string_field(doc["facet_size"], "facet_size");
    if (s == "cell_diameter") {
      cfg.facet_size = FacetSize::CellDiameter;
    } else if (s == "edge_length") {
      cfg.facet_size = FacetSize::EdgeLength;
    } else {
      throw ConfigError("facet_size must be 'cell_diameter' or 'edge_length'");
    }
  }
  if (doc.contains("b3_form")) {
    const std::string s = string_field(doc["b3_form"], "b3_form");
    if (s == "inverse_sum") {
      cfg.b3_form = B3Form::InverseSum;
    } else if (s == "riesz") {
      cfg.b3_form = B3Form::RieszComposition;
    } else {
      throw ConfigError("b3_form must be 'inverse_sum' or 'riesz'");
    }
  }
  if (doc.contains("workers")) {
    if (!doc["workers"].is_number_integer() || doc["workers"].get<int>() < 0) {
      throw ConfigError("'workers' must be a nonnegative integer");
    }
    cfg.workers = doc["workers"].get<int>();
  }
  if (doc.contains("timing")) {
    if (!doc["timing"].is_boolean()) throw ConfigError("'timing' must be true or false");
    cfg.timing = doc["timing"].get<bool>();
  }
  if (doc.contains("reduction")) {
    if (!doc["reduction"].is_number()) throw ConfigError("'reduction' must be a number");
    cfg.reduction = doc["reduction"].get<double>();
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (!compatible(cfg.problem, cfg.element)) {
    throw ConfigError("element " + to_string(cfg.element) + " does not discretize " + to_string(cfg.problem));
  }
  if (!compatible(cfg.precond, cfg.problem)) {
    throw ConfigError("preconditioner " + to_string(cfg.precond) + " does not apply to " + to_string(cfg.problem));
  }
  if (cfg.n.empty()) throw ConfigError("grid 'n' is empty");
  for (int n : cfg.n) {
    if (n < 2 || n > 32 || (n & (n - 1)) != 0) {
      throw ConfigError("mesh size n=" + std::to_string(n) + " is not a power of two in [2, 32]");
    }
  }
  const std::pair<const char*, const std::vector<double>*> grids[] = {
      {"K", &cfg.K}, {"alpha", &cfg.alpha}, {"lambda", &cfg.lambda},
      {"c", &cfg.c}, {"mu", &cfg.mu},       {"tau", &cfg.tau}};
  for (const auto& [key, g] : grids) {
    if (g->empty()) throw ConfigError(std::string("grid '") + key + "' is empty");
  }
  if (!(cfg.reduction > 0.0 && cfg.reduction < 1.0)) throw ConfigError("'reduction' must lie in (0, 1)");
  for (const SweepPoint& p : expand_grid(cfg)) {
    try {
      p.problem.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(describe(p) + ": " + e.what());
    }
  }
}

std::vector<SweepPoint> expand_grid(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> out;
  PrecondSpec ps;
  ps.kind = cfg.precond;
  ps.facet_size = cfg.facet_size;
  ps.b3_form = cfg.b3_form;
  for (int n : cfg.n)
    for (double K : cfg.K)
      for (double alpha : cfg.alpha)
        for (double lambda : cfg.lambda)
          for (double c : cfg.c)
            for (double mu : cfg.mu)
              for (double tau : cfg.tau) {
                ParameterSet p;
                p.K = K;
                p.alpha = alpha;
                p.lambda = lambda;
                p.c = c;
                p.mu = mu;
                p.tau = tau;
                out.push_back({ProblemSpec{cfg.problem, cfg.element, n, p}, ps});
              }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

}  // namespace mixedlab::harness
