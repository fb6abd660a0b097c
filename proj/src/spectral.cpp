#include "mixedlab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mixedlab {

Eigen::VectorXd sym_eig(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (a.size() == 0) return Eigen::VectorXd();
  const double scale = a.cwiseAbs().maxCoeff();
  const double defect = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) throw std::invalid_argument("sym_eig: matrix has non-finite entries");
  if (defect > 1e-10 * scale) throw std::invalid_argument("sym_eig: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: QL iteration did not converge");
  return es.eigenvalues();
}

SpectrumResult spectrum_from_eigenvalues(const Eigen::VectorXd& ev, const SpectrumOptions& options) {
  SpectrumResult r;
  r.n_dofs = static_cast<int>(ev.size());
  const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  double low = top;
  for (int i = 0; i < ev.size(); ++i) {
    const double m = std::abs(ev(i));
    if (m < options.zero_tolerance * top) {
      ++r.zero_eigenvalues;
    } else {
      low = std::min(low, m);
    }
  }
  r.lambda_max_abs = top;
  r.lambda_min_abs = low;
  r.cond = low > 0.0 ? top / low : std::numeric_limits<double>::infinity();
  if (options.keep_eigenvalues) r.eigenvalues = ev;
  return r;
}

SpectrumResult preconditioned_spectrum(const BlockMatrix& system, const Preconditioner& precond,
                                       const SpectrumOptions& options) {
  const int n = system.rows();
  if (precond.rows() != n) {
    throw std::invalid_argument("preconditioner has " + std::to_string(precond.rows()) +
                                " rows, system has " + std::to_string(n));
  }
  // Factor P block by block so a failure can name the block.
  std::vector<Eigen::MatrixXd> factors;
  for (const NormBlock& b : precond.blocks()) {
    Eigen::LLT<Eigen::MatrixXd> llt(b.materialize());
    if (llt.info() != Eigen::Success) {
      throw SingularBlockError(b.name(), "preconditioner block '" + b.name() + "' is not positive definite");
    }
    factors.push_back(llt.matrixL());
  }
  const Eigen::MatrixXd a = system.dense();
  Eigen::MatrixXd al(n, n);
  const auto& blocks = precond.blocks();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const int o = blocks[j].offset(), s = blocks[j].size();
    al.middleCols(o, s).noalias() = a.middleCols(o, s) * factors[j].triangularView<Eigen::Lower>();
  }
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int o = blocks[i].offset(), s = blocks[i].size();
    b.middleRows(o, s).noalias() = factors[i].transpose().triangularView<Eigen::Upper>() * al.middleRows(o, s);
  }
  b = 0.5 * (b + b.transpose()).eval();
  return spectrum_from_eigenvalues(sym_eig(b), options);
}

double infsup_constant(const SparseMatrix& d, const SparseMatrix& n_v, const SparseMatrix& m_q,
                       double zero_tolerance) {
  if (d.cols() != n_v.rows() || d.rows() != m_q.rows()) {
    throw std::invalid_argument("infsup_constant: dimension mismatch");
  }
  Eigen::SimplicialLDLT<SparseMatrix> nf(n_v);
  if (nf.info() != Eigen::Success) throw SingularBlockError("V", "V-norm matrix could not be factored");
  const Eigen::MatrixXd dt = Eigen::MatrixXd(SparseMatrix(d.transpose()));
  const Eigen::MatrixXd s = Eigen::MatrixXd(d) * nf.solve(dt);
  const Eigen::LLT<Eigen::MatrixXd> mq{Eigen::MatrixXd(m_q)};
  if (mq.info() != Eigen::Success) throw SingularBlockError("Q", "Q-norm matrix is not positive definite");
  Eigen::MatrixXd t = mq.matrixL().solve(s);
  t = mq.matrixL().solve(t.transpose().eval()).transpose().eval();
  const Eigen::VectorXd ev = sym_eig(0.5 * (t + t.transpose()));
  const double top = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > zero_tolerance * top) return std::sqrt(ev(i));
  }
  throw std::runtime_error("infsup_constant: no nonzero eigenvalue");
}

MinresResult minres(const SparseMatrix& a, const Preconditioner& precond, const Eigen::VectorXd& rhs,
                    double reduction, int max_iterations) {
  const int n = static_cast<int>(a.rows());
  if (rhs.size() != n || precond.rows() != n) throw std::invalid_argument("minres: dimension mismatch");
  if (!(reduction > 0.0 && reduction < 1.0)) throw std::invalid_argument("minres: reduction must lie in (0, 1)");
  if (max_iterations <= 0) max_iterations = 10 * n;

  MinresResult out;
  out.solution = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = rhs;
  Eigen::VectorXd z = precond.apply(v);
  double gamma = z.dot(v);
  if (gamma < 0.0) throw std::runtime_error("minres: preconditioner is indefinite at iteration 0");
  gamma = std::sqrt(gamma);
  out.residuals.push_back(gamma);
  if (gamma == 0.0) {
    out.converged = true;
    return out;
  }
  const double target = reduction * gamma;
  double gamma_old = 1.0, eta = gamma;
  double c_old = 1.0, c = 1.0, s_old = 0.0, s = 0.0;
  Eigen::VectorXd w_old = Eigen::VectorXd::Zero(n), w = Eigen::VectorXd::Zero(n);

  for (int j = 1; j <= max_iterations; ++j) {
    z /= gamma;
    const Eigen::VectorXd az = a * z;
    const double delta = az.dot(z);
    Eigen::VectorXd v_new = az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    Eigen::VectorXd z_new = precond.apply(v_new);
    double gamma_new = z_new.dot(v_new);
    if (gamma_new < 0.0) {
      throw std::runtime_error("minres: preconditioner is indefinite at iteration " + std::to_string(j));
    }
    gamma_new = std::sqrt(gamma_new);
    const double a0 = c * delta - c_old * s * gamma;
    const double a1 = std::hypot(a0, gamma_new);
    const double a2 = s * delta + c_old * c * gamma;
    const double a3 = s_old * gamma;
    if (a1 == 0.0) throw std::runtime_error("minres: breakdown at iteration " + std::to_string(j));
    const double c_new = a0 / a1, s_new = gamma_new / a1;
    Eigen::VectorXd w_new = (z - a3 * w_old - a2 * w) / a1;
    out.solution += c_new * eta * w_new;
    eta = -s_new * eta;
    out.residuals.push_back(std::abs(eta));
    out.iterations = j;

    v_old = std::move(v);
    v = std::move(v_new);
    z = std::move(z_new);
    w_old = std::move(w);
    w = std::move(w_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
    if (std::abs(eta) <= target) {
      out.converged = true;
      break;
    }
    if (gamma == 0.0) {
      // Invariant Krylov space: the iterate is exact up to roundoff.
      out.converged = true;
      break;
    }
  }
  return out;
}

std::string describe(const SweepPoint& point) {
  const ParameterSet& p = point.problem.params;
  std::ostringstream s;
  s << to_string(point.problem.kind) << '/' << to_string(point.problem.combo) << '/'
    << to_string(point.precond.kind) << " n=" << point.problem.n << " K=" << p.K << " alpha=" << p.alpha
    << " lambda=" << p.lambda << " c=" << p.c << " mu=" << p.mu << " tau=" << p.tau;
  return s.str();
}

std::vector<SweepRow> condition_sweep(const std::vector<SweepPoint>& points, int workers,
                                      const SpectrumOptions& options) {
  if (points.empty()) throw std::invalid_argument("condition_sweep: empty grid");
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = rows[i];
      row.point = points[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const ProblemSpec& ps = points[i].problem;
        ps.validate();
        const DiscretizationPtr d = discretization(ps.kind, ps.combo, ps.n, points[i].precond.facet_size);
        const BlockMatrix a = assemble_system(ps, *d);
        const Preconditioner p = assemble_preconditioner(points[i].precond, ps, *d);
        row.spectrum = preconditioned_spectrum(a, p, options);
      } catch (const std::exception& e) {
        row.error = describe(points[i]) + ": " + e.what();
      }
      row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  unsigned count = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, static_cast<unsigned>(points.size()));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace mixedlab
