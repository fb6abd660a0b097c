#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedlab/spectral.hpp"

namespace mixedlab::harness {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kPass = 0, kViolation = 1, kConfigError = 2 };

/// Malformed or out-of-range experiment input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::PoissonDirichlet;
  ElementCombo element = ElementCombo::RT0_P0;
  PrecondKind precond = PrecondKind::DarcyB;
  std::vector<int> n{4};
  std::vector<double> K{1.0}, alpha{1.0}, lambda{1.0}, c{0.0}, mu{1.0}, tau{1.0};
  std::optional<std::filesystem::path> output;
  /// Recognized keys: cond_max, h_variation, minres_growth.
  std::map<std::string, double> tolerances;
  FacetSize facet_size = FacetSize::CellDiameter;
  B3Form b3_form = B3Form::InverseSum;
  int workers = 0;
  /// Wall-clock times vary between runs, so they are written only on request.
  bool timing = false;
  double reduction = 1e-6;

  std::optional<double> tolerance(const std::string& key) const;
};

/// Parses a JSON document; unknown keys are rejected so typos surface early.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError. Checks grid shapes, mesh sizes and every grid point.
void validate(const ExperimentConfig& config);

/// Grid points in lexicographic order of (n, K, alpha, lambda, c, mu, tau).
std::vector<SweepPoint> expand_grid(const ExperimentConfig& config);

/// Shortest decimal form that round-trips the value.
std::string format_number(double value);

}  // namespace mixedlab::harness
