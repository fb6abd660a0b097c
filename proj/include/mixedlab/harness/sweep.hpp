#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixedlab/harness/config.hpp"

namespace mixedlab::harness {

struct SweepOutcome {
  std::vector<SweepRow> rows;
  /// Human-readable tolerance failures; empty when every check held.
  std::vector<std::string> violations;
};

/// Evaluates the configured grid. Failed points are kept as rows with an error.
SweepOutcome run_sweep(const ExperimentConfig& config);

/// Checks cond_max and h_variation (between the two finest n of each parameter
/// combination). Rows with errors always count as violations.
std::vector<std::string> check_sweep(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

/// Header plus one line per row. runtime_seconds is written as 0 unless timing is set.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Formats a condition number to three significant figures.
std::string format_cond(double value);

}  // namespace mixedlab::harness
