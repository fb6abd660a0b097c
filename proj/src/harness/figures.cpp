#include "mixedlab/harness/figures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "mixedlab/harness/sweep.hpp"

namespace mixedlab::harness {

namespace {

constexpr double kBound = 10.0;

struct PoissonFigure {
  ProblemKind kind;
  ElementCombo combo;
  PrecondKind precond;
};

bool poisson_figure(const std::string& id, PoissonFigure& out) {
  static const std::map<std::string, PoissonFigure> figs = {
      {"helm_p_rt0", {ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, PrecondKind::DarcyB}},
      {"helm_p_bdm1", {ProblemKind::PoissonDirichlet, ElementCombo::BDM1_P0, PrecondKind::DarcyB}},
      {"helm_p_rt1", {ProblemKind::PoissonDirichlet, ElementCombo::RT1_P1dg, PrecondKind::DarcyB}},
      {"helm_flux_rt0", {ProblemKind::PoissonNeumannK, ElementCombo::RT0_P0, PrecondKind::NeumannBK}},
      {"helm_flux_bdm1", {ProblemKind::PoissonNeumannK, ElementCombo::BDM1_P0, PrecondKind::NeumannBK}}};
  auto it = figs.find(id);
  if (it == figs.end()) return false;
  out = it->second;
  return true;
}

std::string series_label(const ParameterSet& p, bool biot) {
  std::string s = "K=" + format_number(p.K) + " alpha=" + format_number(p.alpha);
  if (biot) s += " lambda=" + format_number(p.lambda) + " c=" + format_number(p.c);
  return s;
}

}  // namespace

bool FigureResult::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass; });
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"helm_p_rt0",    "helm_p_bdm1",    "helm_p_rt1",
                                               "helm_flux_rt0", "helm_flux_bdm1", "biot"};
  return ids;
}

std::pair<std::vector<SweepPoint>, std::vector<std::string>> figure_grid(const std::string& id, bool extended) {
  std::vector<SweepPoint> points;
  std::vector<std::string> series;
  PoissonFigure pf;
  if (poisson_figure(id, pf)) {
    std::vector<int> ns = {4, 8, 16};
    if (extended) ns.push_back(32);
    PrecondSpec ps;
    ps.kind = pf.precond;
    for (double alpha : {0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0})
      for (int k = -8; k <= 8; k += 2)
        for (int n : ns) {
          ParameterSet p;
          p.alpha = alpha;
          p.K = std::pow(10.0, k);
          points.push_back({ProblemSpec{pf.kind, pf.combo, n, p}, ps});
          series.push_back(series_label(p, false));
        }
  } else if (id == "biot") {
    std::vector<int> ns = {4, 8};
    if (extended) ns.push_back(16);
    PrecondSpec ps;
    ps.kind = PrecondKind::BiotB;
    for (double K : {1e-12, 1e-8, 1e-4, 1.0})
      for (double lambda : {1.0, 1e4, 1e8, 1e16})
        for (double alpha : {0.0, 0.5, 1.0})
          for (double c : {0.0, 1e-8, 1e-4, 1e-2, 1.0})
            for (int n : ns) {
              ParameterSet p;
              p.K = K;
              p.lambda = lambda;
              p.alpha = alpha;
              p.c = c;
              points.push_back({ProblemSpec{ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, n, p}, ps});
              series.push_back(series_label(p, true));
            }
  } else {
    std::string known;
    for (const auto& k : figure_ids()) known += " " + k;
    throw ConfigError("unknown figure id '" + id + "' (known:" + known + ")");
  }
  return {points, series};
}

FigureResult reproduce_figure(const std::string& id, bool extended, int workers) {
  auto [points, series] = figure_grid(id, extended);
  FigureResult fig;
  fig.id = id;
  fig.title = to_string(points.front().precond.kind) + " on " + to_string(points.front().problem.kind) + ", " +
              to_string(points.front().problem.combo);
  fig.rows = condition_sweep(points, workers);
  fig.series = std::move(series);

  double worst = 0.0;
  std::string where;
  int errors = 0;
  for (const SweepRow& r : fig.rows) {
    if (!r.spectrum) {
      ++errors;
      continue;
    }
    if (r.spectrum->cond > worst) {
      worst = r.spectrum->cond;
      where = describe(r.point);
    }
  }
  fig.properties.push_back({"all points computed", errors == 0, std::to_string(errors) + " failed points"});
  fig.properties.push_back({"uniform bound cond <= " + format_number(kBound), errors == 0 && worst <= kBound,
                            "max " + format_cond(worst) + " at " + where});

  if (id == "biot") {
    std::map<std::string, std::vector<std::pair<int, double>>> by_series;
    for (std::size_t i = 0; i < fig.rows.size(); ++i) {
      if (fig.rows[i].spectrum) by_series[fig.series[i]].emplace_back(fig.rows[i].point.problem.n, fig.rows[i].spectrum->cond);
    }
    double var = 0.0;
    std::string at;
    for (auto& [s, v] : by_series) {
      std::sort(v.begin(), v.end());
      if (v.size() < 2) continue;
      const double d = std::abs(v.back().second - v[v.size() - 2].second) / v[v.size() - 2].second;
      if (d > var) {
        var = d;
        at = s;
      }
    }
    fig.properties.push_back({"change between the two finest h <= 10%", var <= 0.10,
                              "largest " + format_cond(100.0 * var) + "% at " + at});
  }
  return fig;
}

void write_figure_csv(std::ostream& out, const FigureResult& fig) {
  out << "figure,series,problem,element,precond,K,alpha,lambda,c,mu,tau,n,h,cond,error\n";
  for (std::size_t i = 0; i < fig.rows.size(); ++i) {
    const SweepRow& r = fig.rows[i];
    const ParameterSet& p = r.point.problem.params;
    out << fig.id << ',' << csv_field(fig.series[i]) << ',' << to_string(r.point.problem.kind) << ','
        << to_string(r.point.problem.combo) << ',' << to_string(r.point.precond.kind) << ',' << format_number(p.K)
        << ',' << format_number(p.alpha) << ',' << format_number(p.lambda) << ',' << format_number(p.c) << ','
        << format_number(p.mu) << ',' << format_number(p.tau) << ',' << r.point.problem.n << ','
        << format_number(1.0 / r.point.problem.n) << ',' << (r.spectrum ? format_number(r.spectrum->cond) : "")
        << ',' << csv_field(r.error) << '\n';
  }
}

void write_figure_plot_data(std::ostream& out, const FigureResult& fig) {
  out << "# " << fig.id << ": " << fig.title << "\n# columns: h cond\n";
  std::string current;
  bool first = true;
  for (std::size_t i = 0; i < fig.rows.size(); ++i) {
    if (first || fig.series[i] != current) {
      if (!first) out << "\n\n";
      out << "# series " << fig.series[i] << "\n";
      current = fig.series[i];
      first = false;
    }
    const SweepRow& r = fig.rows[i];
    out << format_number(1.0 / r.point.problem.n) << ' ' << (r.spectrum ? format_number(r.spectrum->cond) : "nan")
        << '\n';
  }
}

}  // namespace mixedlab::harness
