#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixedlab/harness/config.hpp"

namespace mixedlab::harness {

/// Acceptance rule for one computed value against its reference.
struct Tolerance {
  enum class Kind { Relative, Absolute, Factor, Above, AtMost, AtLeast, Within, Informational };
  Kind kind = Kind::Informational;
  double a = 0.0;
  double b = 0.0;

  static Tolerance relative(double r) { return {Kind::Relative, r}; }
  static Tolerance absolute(double d) { return {Kind::Absolute, d}; }
  static Tolerance factor(double f) { return {Kind::Factor, f}; }
  static Tolerance above(double x) { return {Kind::Above, x}; }
  static Tolerance at_most(double x) { return {Kind::AtMost, x}; }
  static Tolerance at_least(double x) { return {Kind::AtLeast, x}; }
  static Tolerance within(double lo, double hi) { return {Kind::Within, lo, hi}; }
  static Tolerance informational() { return {}; }

  /// Relative, Absolute and Factor need a reference value.
  bool accepts(double computed, std::optional<double> reference) const;
  std::string describe() const;
};

struct ReferenceCell {
  std::string row;  ///< parameter label shared by the cells of one table row
  SweepPoint point;
  std::optional<double> reference;
  std::string reference_text;
  Tolerance tolerance;
  /// Tighter match that is reported but does not decide the status.
  std::optional<Tolerance> stretch;
  bool h_flat = false;  ///< take part in the table's mesh-variation check
};

struct TableSpec {
  std::string id;
  std::string title;
  std::vector<int> n_values;
  std::vector<ReferenceCell> cells;
  /// Maximum relative change of h_flat rows between meshes.
  std::optional<double> h_variation;
  /// Compare only the two finest meshes instead of every successive pair.
  bool finest_pair_only = false;
};

const std::vector<std::string>& table_ids();
/// Throws ConfigError for an unknown id. `extended` adds h = 2^-5 where the
/// reference has that column, and h = 2^-4 to the Biot sweep.
TableSpec table_spec(const std::string& id, bool extended = false);

struct CellOutcome {
  std::optional<double> computed;
  std::string error;
  bool pass = false;
  std::optional<bool> stretch_pass;
};

struct PropertyOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct TableReport {
  TableSpec spec;
  std::vector<CellOutcome> cells;  ///< parallel to spec.cells
  std::vector<PropertyOutcome> properties;

  int failures() const;
  bool pass() const { return failures() == 0; }
};

/// Scores precomputed rows (parallel to spec.cells) without running anything.
TableReport evaluate_table(const TableSpec& spec, const std::vector<SweepRow>& rows);
TableReport reproduce_table(const std::string& id, bool extended = false, int workers = 0);

/// Side-by-side plain-text report; every cell lists reference and tolerance.
void write_table_report(std::ostream& out, const TableReport& report);
void write_table_csv(std::ostream& out, const TableReport& report);

}  // namespace mixedlab::harness
