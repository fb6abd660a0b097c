#include "mixedlab/harness/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <tuple>

namespace mixedlab::harness {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
  validate(config);
  SweepOutcome out;
  out.rows = condition_sweep(expand_grid(config), config.workers);
  out.violations = check_sweep(out.rows, config);
  return out;
}

std::vector<std::string> check_sweep(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
  std::vector<std::string> bad;
  const auto cond_max = config.tolerance("cond_max");
  for (const SweepRow& r : rows) {
    if (!r.spectrum) {
      bad.push_back(r.error);
    } else if (cond_max && !(r.spectrum->cond <= *cond_max)) {
      bad.push_back(describe(r.point) + ": cond " + format_cond(r.spectrum->cond) + " exceeds " +
                    format_number(*cond_max));
    }
  }
  const auto hvar = config.tolerance("h_variation");
  if (hvar && config.n.size() >= 2) {
    std::vector<int> ns = config.n;
    std::sort(ns.begin(), ns.end());
    const int fine = ns.back(), coarse = ns[ns.size() - 2];
    using Key = std::tuple<double, double, double, double, double, double>;
    std::map<Key, std::pair<const SweepRow*, const SweepRow*>> pairs;
    for (const SweepRow& r : rows) {
      const ParameterSet& p = r.point.problem.params;
      const Key key{p.K, p.alpha, p.lambda, p.c, p.mu, p.tau};
      if (r.point.problem.n == coarse) pairs[key].first = &r;
      if (r.point.problem.n == fine) pairs[key].second = &r;
    }
    for (const auto& [key, pr] : pairs) {
      if (!pr.first || !pr.second || !pr.first->spectrum || !pr.second->spectrum) continue;
      const double a = pr.first->spectrum->cond, b = pr.second->spectrum->cond;
      const double v = std::abs(b - a) / a;
      if (!(v <= *hvar)) {
        bad.push_back(describe(pr.second->point) + ": cond changes by " + format_cond(100.0 * v) +
                      "% from n=" + std::to_string(coarse));
      }
    }
  }
  return bad;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing) {
  out << "problem,element,precond,n,h,K,alpha,lambda,c,mu,tau,n_dofs,lambda_min_abs,lambda_max_abs,cond,"
         "runtime_seconds,error\n";
  for (const SweepRow& r : rows) {
    const ProblemSpec& s = r.point.problem;
    const ParameterSet& p = s.params;
    out << to_string(s.kind) << ',' << to_string(s.combo) << ',' << to_string(r.point.precond.kind) << ','
        << s.n << ',' << format_number(1.0 / s.n) << ',' << format_number(p.K) << ',' << format_number(p.alpha)
        << ',' << format_number(p.lambda) << ',' << format_number(p.c) << ',' << format_number(p.mu) << ','
        << format_number(p.tau) << ',';
    if (r.spectrum) {
      out << r.spectrum->n_dofs << ',' << format_number(r.spectrum->lambda_min_abs) << ','
          << format_number(r.spectrum->lambda_max_abs) << ',' << format_number(r.spectrum->cond);
    } else {
      out << ",,,";
    }
    out << ',' << format_number(timing ? r.runtime_seconds : 0.0) << ',' << csv_field(r.error) << '\n';
  }
}

std::string format_cond(double value) {
  if (!std::isfinite(value)) return "inf";
  char buf[32];
  const double a = std::abs(value);
  if (value != 0.0 && (a >= 1e4 || a < 1e-2)) {
    std::snprintf(buf, sizeof buf, "%.2e", value);
  } else if (a >= 99.95) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    // Keep trailing zeros so 2 prints as 2.00.
    std::snprintf(buf, sizeof buf, "%#.3g", value);
  }
  return buf;
}

}  // namespace mixedlab::harness
