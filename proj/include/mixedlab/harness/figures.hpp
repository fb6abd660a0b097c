#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixedlab/harness/tables.hpp"

namespace mixedlab::harness {

struct FigureResult {
  std::string id;
  std::string title;
  std::vector<SweepRow> rows;
  /// Series label per row; a series fixes every parameter and varies h.
  std::vector<std::string> series;
  std::vector<PropertyOutcome> properties;

  bool pass() const;
};

const std::vector<std::string>& figure_ids();

/// Grid points and series labels of a figure, without running them.
/// Throws ConfigError for an unknown id.
std::pair<std::vector<SweepPoint>, std::vector<std::string>> figure_grid(const std::string& id, bool extended = false);

/// Poisson figures run alpha in {0, 1e-8, 1e-6, 1e-4, 1e-2, 1} against K in
/// {1e-8, 1e-6, ..., 1e8} at h in {2^-2, 2^-3, 2^-4}; the Biot figure uses the
/// robustness grid at h in {2^-2, 2^-3}. `extended` adds one finer mesh.
/// Both assert a uniform bound of 10; the Biot figure also bounds the change
/// between the two finest meshes by 10%.
FigureResult reproduce_figure(const std::string& id, bool extended = false, int workers = 0);

/// Long format: series, parameters, n, h, cond.
void write_figure_csv(std::ostream& out, const FigureResult& fig);
/// Whitespace-separated blocks of "h cond", one block per series, separated
/// by two blank lines and headed by a comment naming the series.
void write_figure_plot_data(std::ostream& out, const FigureResult& fig);

}  // namespace mixedlab::harness
