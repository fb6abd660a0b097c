// Command-line front end. Exit codes: 0 all checks pass, 1 tolerance
// violation, 2 configuration error.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mixedlab/harness/export.hpp"
#include "mixedlab/harness/figures.hpp"
#include "mixedlab/harness/minres_experiment.hpp"
#include "mixedlab/harness/selftest.hpp"
#include "mixedlab/harness/sweep.hpp"
#include "mixedlab/harness/tables.hpp"

namespace fs = std::filesystem;
using namespace mixedlab;
using namespace mixedlab::harness;

namespace {

// All file output funnels through here so writes stay serialized.
template <class Fn>
void write_file(const fs::path& path, Fn&& fill) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  fill(out);
}

int report_violations(const std::vector<std::string>& v) {
  for (const auto& s : v) std::cerr << "violation: " << s << "\n";
  return v.empty() ? kPass : kViolation;
}

int cmd_sweep(const std::string& config_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const SweepOutcome out = run_sweep(cfg);
  if (cfg.output) {
    write_file(*cfg.output, [&](std::ostream& o) { write_sweep_csv(o, out.rows, cfg.timing); });
    std::cerr << out.rows.size() << " rows written to " << cfg.output->string() << "\n";
  } else {
    write_sweep_csv(std::cout, out.rows, cfg.timing);
  }
  return report_violations(out.violations);
}

int cmd_table(const std::string& id, bool extended, const std::string& csv, int workers) {
  table_spec(id, extended);  // reject unknown ids before any work
  const TableReport rep = reproduce_table(id, extended, workers);
  write_table_report(std::cout, rep);
  if (!csv.empty()) write_file(csv, [&](std::ostream& o) { write_table_csv(o, rep); });
  return rep.pass() ? kPass : kViolation;
}

int cmd_figure(const std::string& id, bool extended, const std::string& out_dir, int workers) {
  figure_grid(id, extended);
  const FigureResult fig = reproduce_figure(id, extended, workers);
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  write_file(dir / (id + ".csv"), [&](std::ostream& o) { write_figure_csv(o, fig); });
  write_file(dir / (id + ".dat"), [&](std::ostream& o) { write_figure_plot_data(o, fig); });
  std::cout << "figure " << fig.id << ": " << fig.title << ", " << fig.rows.size() << " points\n";
  for (const auto& p : fig.properties) {
    std::cout << "property: " << p.name << ": " << (p.pass ? "pass" : "FAIL") << " (" << p.detail << ")\n";
  }
  std::cout << "data: " << (dir / (id + ".csv")).string() << ", " << (dir / (id + ".dat")).string() << "\n";
  return fig.pass() ? kPass : kViolation;
}

int cmd_minres(const std::string& config_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const MinresOutcome out = run_minres_experiment(cfg);
  if (cfg.output) {
    write_file(*cfg.output, [&](std::ostream& o) { write_minres_csv(o, out.rows, cfg.timing); });
  }
  write_minres_csv(std::cout, out.rows, cfg.timing);
  return report_violations(out.violations);
}

int cmd_selftest(const std::string& fault) {
  const bool ok = write_selftest(std::cout, run_selftest(parse_fault(fault)));
  return ok ? kPass : kViolation;
}

int cmd_export(const std::string& dir, const std::string& config_path) {
  std::vector<SweepPoint> points =
      config_path.empty() ? default_export_points() : expand_grid(load_config(config_path));
  const auto files = export_matrices(dir, points);
  for (const auto& f : files) std::cout << f << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-robust preconditioners for perturbed saddle-point problems"};
  app.require_subcommand(1);

  std::string config, id, out, fault, dir;
  bool extended = false;
  int workers = 0;

  auto* sweep = app.add_subcommand("sweep", "condition numbers over a parameter grid");
  sweep->add_option("--config", config, "JSON experiment file")->required();

  auto* table = app.add_subcommand("table", "reproduce a reference table");
  table->add_option("--id", id, "table id")->required();
  table->add_flag("--extended", extended, "add the finest mesh");
  table->add_option("--csv", out, "also write the report as CSV");
  table->add_option("--workers", workers, "worker threads (0 = hardware)");

  auto* figure = app.add_subcommand("figure", "plot data for a figure");
  figure->add_option("--id", id, "figure id")->required();
  figure->add_flag("--extended", extended, "add a finer mesh");
  figure->add_option("--out", dir, "output directory (default .)");
  figure->add_option("--workers", workers, "worker threads (0 = hardware)");

  auto* mr = app.add_subcommand("minres", "MinRes iteration counts");
  mr->add_option("--config", config, "JSON experiment file")->required();

  auto* self = app.add_subcommand("selftest", "invariant checks on small meshes");
  self->add_option("--inject-fault", fault, "none | mass-asymmetry");

  auto* exp = app.add_subcommand("export", "write matrices in Matrix Market format");
  exp->add_option("--matrices", dir, "output directory")->required();
  exp->add_option("--config", config, "export the grid of this config instead of the defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }

  try {
    if (*sweep) return cmd_sweep(config);
    if (*table) return cmd_table(id, extended, out, workers);
    if (*figure) return cmd_figure(id, extended, dir, workers);
    if (*mr) return cmd_minres(config);
    if (*self) return cmd_selftest(fault);
    if (*exp) return cmd_export(dir, config);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kConfigError;
}
