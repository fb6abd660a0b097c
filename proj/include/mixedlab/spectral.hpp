#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixedlab/preconditioner.hpp"

namespace mixedlab {

struct SpectrumResult {
  double lambda_min_abs = 0.0;
  double lambda_max_abs = 0.0;
  double cond = 0.0;
  int n_dofs = 0;
  /// Eigenvalues below the zero threshold; reported separately and kept out of cond.
  int zero_eigenvalues = 0;
  std::optional<Eigen::VectorXd> eigenvalues;
};

struct SpectrumOptions {
  /// |lambda| < zero_tolerance * max|lambda| counts as a zero eigenvalue.
  double zero_tolerance = 1e-14;
  bool keep_eigenvalues = false;
};

/// Ascending eigenvalues of a dense symmetric matrix. Rejects matrices whose
/// relative asymmetry exceeds 1e-10 with std::invalid_argument.
Eigen::VectorXd sym_eig(const Eigen::MatrixXd& a);

/// Spectrum of P A via the congruence L^T A L with P = L L^T factored blockwise.
SpectrumResult preconditioned_spectrum(const BlockMatrix& system, const Preconditioner& precond,
                                       const SpectrumOptions& options = {});
SpectrumResult spectrum_from_eigenvalues(const Eigen::VectorXd& eigenvalues, const SpectrumOptions& options);

/// Smallest nonzero generalized singular value of D between the V-norm N_V and
/// the Q-norm M_Q: beta^2 = min nonzero eig of (D N_V^{-1} D^T, M_Q).
double infsup_constant(const SparseMatrix& d, const SparseMatrix& n_v, const SparseMatrix& m_q,
                       double zero_tolerance = 1e-10);

struct MinresResult {
  Eigen::VectorXd solution;
  int iterations = 0;
  bool converged = false;
  /// Preconditioned residual norms ||r_k||_P, starting with ||r_0||_P.
  std::vector<double> residuals;
};

/// Preconditioned MinRes from a zero initial guess. Stops once ||r||_P drops below
/// reduction * ||r_0||_P or after max_iterations (default 10 n). Throws
/// std::runtime_error on breakdown, naming the iteration.
MinresResult minres(const SparseMatrix& a, const Preconditioner& precond, const Eigen::VectorXd& rhs,
                    double reduction = 1e-6, int max_iterations = 0);

struct SweepPoint {
  ProblemSpec problem;
  PrecondSpec precond;
};

struct SweepRow {
  SweepPoint point;
  std::optional<SpectrumResult> spectrum;
  std::string error;
  double runtime_seconds = 0.0;
};

/// Evaluates every point on a bounded worker pool. Rows come back in input
/// order; failures are recorded per row, tagged with the grid point.
std::vector<SweepRow> condition_sweep(const std::vector<SweepPoint>& points, int workers = 0,
                                      const SpectrumOptions& options = {});

std::string describe(const SweepPoint& point);

}  // namespace mixedlab
