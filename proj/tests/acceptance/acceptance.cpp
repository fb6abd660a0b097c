// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Pass --verbose to also print every failing table cell.
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include "mixedlab/harness/minres_experiment.hpp"
#include "mixedlab/harness/selftest.hpp"
#include "mixedlab/harness/tables.hpp"

using namespace mixedlab;
using namespace mixedlab::harness;

namespace {

bool verbose = false;

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict table_verdict(const std::vector<std::string>& ids) {
  Verdict v{true, ""};
  for (const auto& id : ids) {
    const TableReport rep = reproduce_table(id, false, 0);
    int ok = 0;
    for (const auto& c : rep.cells) ok += c.pass;
    int props_ok = 0;
    for (const auto& p : rep.properties) props_ok += p.pass;
    v.pass = v.pass && rep.pass();
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += id + " " + std::to_string(ok) + "/" + std::to_string(rep.cells.size()) + " cells";
    if (!rep.properties.empty()) {
      v.detail += ", " + std::to_string(props_ok) + "/" + std::to_string(rep.properties.size()) + " properties";
    }
    if (verbose && !rep.pass()) {
      std::ostringstream out;
      write_table_report(out, rep);
      std::istringstream in(out.str());
      for (std::string line; std::getline(in, line);) {
        if (line.find("FAIL") != std::string::npos) std::cout << "    " << id << ": " << line << "\n";
      }
    }
  }
  return v;
}

Verdict property_suite() {
  Verdict v{true, ""};
  // Algebraic and element invariants on small meshes.
  for (const SelftestGroup& g : run_selftest()) {
    v.pass = v.pass && g.pass;
    if (!g.pass) v.detail += g.name + " failed (" + g.detail + "); ";
  }

  // h-boundedness of MinRes with biot_B.
  ExperimentConfig cfg;
  cfg.problem = ProblemKind::Biot;
  cfg.element = ElementCombo::P2_RT0_P0_P0;
  cfg.precond = PrecondKind::BiotB;
  cfg.n = {16, 32};
  cfg.alpha = {0.5};
  cfg.c = {0.5};
  cfg.tau = {0.1};
  cfg.tolerances["minres_growth"] = 0.2;
  const MinresOutcome out = run_minres_experiment(cfg);
  for (const auto& s : out.violations) v.detail += s + "; ";
  v.pass = v.pass && out.violations.empty() && out.rows.size() == 2;
  if (out.rows.size() == 2) {
    v.detail += "selftest groups, MinRes biot_B n=16: " + std::to_string(out.rows[0].iterations) +
                " its, n=32: " + std::to_string(out.rows[1].iterations) + " its";
  }
  return v;
}

Verdict infsup_verdict() {
  Verdict v{true, ""};
  const auto series = [&](const std::string& label, const std::function<double(int)>& beta) {
    double prev = 0.0;
    std::string vals;
    for (int n : {4, 8, 16}) {
      const double b = beta(n);
      vals += (vals.empty() ? "" : " ") + format_number(std::round(b * 1e4) / 1e4);
      if (!(b > 0.0)) v.pass = false;
      if (prev > 0.0 && std::abs(b - prev) > 0.05 * prev) v.pass = false;
      prev = b;
    }
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += label + " beta " + vals;
  };
  series("RT0/P0", [](int n) {
    const auto d = discretization(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, n);
    return infsup_constant(d->form("D"), d->form("M_q") + d->form("divdiv_q"), d->form("M_p"));
  });
  series("P2vec/P0", [](int n) {
    const auto d = discretization(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, n);
    return infsup_constant(d->form("D_u"), d->form("A_u"), d->form("M_pT"));
  });
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) verbose = verbose || std::strcmp(argv[i], "--verbose") == 0;

  const std::pair<std::string, std::function<Verdict()>> criteria[] = {
      {"1 issues_vv", [] { return table_verdict({"issues_vv"}); }},
      {"2 issues_alpha", [] { return table_verdict({"issues_alpha"}); }},
      {"3 neumann_k1", [] { return table_verdict({"neumann_k1"}); }},
      {"4 biot_sweep", [] { return table_verdict({"biot_sweep"}); }},
      {"5 biot_subopt", [] { return table_verdict({"biot_subopt_b1", "biot_subopt_other"}); }},
      {"6 herrmann", [] { return table_verdict({"herrmann"}); }},
      {"7 properties", property_suite},
      {"8 infsup", infsup_verdict}};

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << std::round(secs * 10) / 10
              << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
