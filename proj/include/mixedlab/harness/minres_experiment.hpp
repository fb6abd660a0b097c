#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixedlab/harness/config.hpp"

namespace mixedlab::harness {

struct MinresRow {
  SweepPoint point;
  int n_dofs = 0;
  int iterations = 0;
  bool converged = false;
  bool monotone = false;
  double relative_residual = 0.0;
  double runtime_seconds = 0.0;
  std::string error;
};

struct MinresOutcome {
  std::vector<MinresRow> rows;
  std::vector<std::string> violations;
};

/// Right-hand side for the Biot test problem: a unit fluid source, which
/// after the implicit time step enters the fluid-pressure rows as -tau M_p 1.
Eigen::VectorXd biot_source_rhs(const BlockMatrix& system, const Discretization& disc, double tau);

/// Runs preconditioned MinRes from zero for every grid point of a Biot config.
/// Violations: non-convergence, nonmonotone residuals, and iteration growth
/// between the two finest n above `minres_growth` (default 20%). Throws
/// ConfigError for a non-Biot problem or exact_inverse beyond n = 16.
MinresOutcome run_minres_experiment(const ExperimentConfig& config);

void write_minres_csv(std::ostream& out, const std::vector<MinresRow>& rows, bool timing);

}  // namespace mixedlab::harness
