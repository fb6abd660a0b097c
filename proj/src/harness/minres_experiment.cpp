#include "mixedlab/harness/minres_experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "mixedlab/harness/sweep.hpp"

namespace mixedlab::harness {

Eigen::VectorXd biot_source_rhs(const BlockMatrix& system, const Discretization& disc, double tau) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(system.rows());
  const SparseMatrix& m = disc.form("M_p");
  const int p = system.num_fields() - 1;
  b.segment(system.offset(p), system.sizes[p]) = -tau * (m * Eigen::VectorXd::Ones(m.cols()));
  return b;
}

MinresOutcome run_minres_experiment(const ExperimentConfig& config) {
  validate(config);
  if (config.problem != ProblemKind::Biot) throw ConfigError("the MinRes experiment runs the biot problem only");
  if (config.precond == PrecondKind::ExactInverse) {
    for (int n : config.n) {
      if (n > 16) throw ConfigError("exact_inverse forms a dense inverse; use n <= 16");
    }
  }
  MinresOutcome out;
  for (const SweepPoint& pt : expand_grid(config)) {
    MinresRow row;
    row.point = pt;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto disc = discretization(pt.problem.kind, pt.problem.combo, pt.problem.n);
      const BlockMatrix system = assemble_system(pt.problem, *disc);
      const Preconditioner p = assemble_preconditioner(pt.precond, pt.problem);
      const SparseMatrix a = system.assemble();
      const Eigen::VectorXd b = biot_source_rhs(system, *disc, pt.problem.params.tau);
      const MinresResult r = minres(a, p, b, config.reduction);
      row.n_dofs = static_cast<int>(a.rows());
      row.iterations = r.iterations;
      row.converged = r.converged;
      row.relative_residual = r.residuals.back() / r.residuals.front();
      row.monotone = std::adjacent_find(r.residuals.begin(), r.residuals.end(), [](double x, double y) {
                       return y > x * (1.0 + 1e-12);
                     }) == r.residuals.end();
    } catch (const std::exception& e) {
      row.error = describe(pt) + ": " + e.what();
    }
    row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.rows.push_back(std::move(row));
  }

  for (const MinresRow& r : out.rows) {
    if (!r.error.empty()) {
      out.violations.push_back(r.error);
    } else if (!r.converged) {
      out.violations.push_back(describe(r.point) + ": no convergence in " + std::to_string(r.iterations) +
                               " iterations");
    } else if (!r.monotone) {
      out.violations.push_back(describe(r.point) + ": preconditioned residuals increased");
    }
  }
  std::vector<int> ns = config.n;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.size() >= 2) {
    const double growth = config.tolerance("minres_growth").value_or(0.20);
    const int coarse = ns[ns.size() - 2], fine = ns.back();
    using Key = std::tuple<double, double, double, double, double, double>;
    std::map<Key, std::pair<const MinresRow*, const MinresRow*>> pairs;
    for (const MinresRow& r : out.rows) {
      const ParameterSet& p = r.point.problem.params;
      const Key key{p.K, p.alpha, p.lambda, p.c, p.mu, p.tau};
      if (r.point.problem.n == coarse) pairs[key].first = &r;
      if (r.point.problem.n == fine) pairs[key].second = &r;
    }
    for (const auto& [key, pr] : pairs) {
      if (!pr.first || !pr.second || !pr.first->error.empty() || !pr.second->error.empty()) continue;
      if (pr.second->iterations > (1.0 + growth) * pr.first->iterations) {
        out.violations.push_back(describe(pr.second->point) + ": " + std::to_string(pr.second->iterations) +
                                 " iterations against " + std::to_string(pr.first->iterations) + " at n=" +
                                 std::to_string(coarse));
      }
    }
  }
  return out;
}

void write_minres_csv(std::ostream& out, const std::vector<MinresRow>& rows, bool timing) {
  out << "problem,element,precond,n,h,K,alpha,lambda,c,mu,tau,n_dofs,iterations,converged,relative_residual,"
         "runtime_seconds,error\n";
  for (const MinresRow& r : rows) {
    const ProblemSpec& s = r.point.problem;
    const ParameterSet& p = s.params;
    out << to_string(s.kind) << ',' << to_string(s.combo) << ',' << to_string(r.point.precond.kind) << ',' << s.n
        << ',' << format_number(1.0 / s.n) << ',' << format_number(p.K) << ',' << format_number(p.alpha) << ','
        << format_number(p.lambda) << ',' << format_number(p.c) << ',' << format_number(p.mu) << ','
        << format_number(p.tau) << ',' << r.n_dofs << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << format_number(r.relative_residual) << ',' << format_number(timing ? r.runtime_seconds : 0.0) << ','
        << csv_field(r.error) << '\n';
  }
}

}  // namespace mixedlab::harness
