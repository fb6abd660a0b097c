#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mixedlab/forms.hpp"

namespace mixedlab {

/// Physical and discretization parameters. tau defaults to 1.
struct ParameterSet {
  double mu = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double c = 0.0;
  double K = 1.0;
  double tau = 1.0;

  /// Throws std::invalid_argument when a value is out of range. The Biot-Willis
  /// range [0,1] is only enforced by `validate_biot`, since the Poisson problems
  /// also use alpha as the perturbation weight (e.g. alpha = 100).
  void validate() const;
  void validate_biot() const;
};

enum class ProblemKind { PoissonDirichlet, PoissonNeumann, PoissonNeumannK, Biot, Herrmann };
enum class ElementCombo { RT0_P0, BDM1_P0, RT1_P1dg, P2_RT0_P0_P0, P2_P1 };

std::string to_string(ProblemKind kind);
std::string to_string(ElementCombo combo);
/// Parse the snake-case names used in configs; throw std::invalid_argument.
ProblemKind parse_problem_kind(const std::string& name);
ElementCombo parse_element_combo(const std::string& name);

bool compatible(ProblemKind kind, ElementCombo combo);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::PoissonDirichlet;
  ElementCombo combo = ElementCombo::RT0_P0;
  int n = 4;
  ParameterSet params;

  void validate() const;
};

/// Square grid of sparse blocks, stored in the symmetric layout
/// [[A, B^T], [B, -C]]. Zero blocks are stored as empty matrices of the right shape.
struct BlockMatrix {
  std::vector<std::string> fields;
  std::vector<int> sizes;
  std::vector<SparseMatrix> blocks;  // row-major, fields.size()^2 entries

  int num_fields() const { return static_cast<int>(fields.size()); }
  int offset(int field) const;
  int rows() const;
  const SparseMatrix& block(int i, int j) const { return blocks[i * num_fields() + j]; }
  SparseMatrix& block(int i, int j) { return blocks[i * num_fields() + j]; }

  SparseMatrix assemble() const;
  Eigen::MatrixXd dense() const;
};

/// Spaces and unweighted reduced forms for one (problem family, element combo, n).
/// Parameters enter only when systems and preconditioners are composed, so one
/// discretization serves an entire parameter sweep.
struct Discretization {
  ElementCombo combo;
  int n = 0;
  MeshPtr mesh;
  std::vector<std::string> fields;
  std::vector<FunctionSpace> spaces;
  std::vector<std::vector<int>> constrained;  // per field, in full numbering
  std::vector<int> sizes;                      // per field, after elimination
  std::map<std::string, SparseMatrix> forms;
  FacetSize facet_size = FacetSize::CellDiameter;

  const SparseMatrix& form(const std::string& name) const;
};

using DiscretizationPtr = std::shared_ptr<const Discretization>;

/// Process-wide cache of discretizations; safe to call from several threads.
DiscretizationPtr discretization(ProblemKind kind, ElementCombo combo, int n,
                                 FacetSize facet_size = FacetSize::CellDiameter);
void clear_discretization_cache();

/// Throws std::invalid_argument for an incompatible element combo or bad parameters.
BlockMatrix assemble_system(const ProblemSpec& spec);
BlockMatrix assemble_system(const ProblemSpec& spec, const Discretization& disc);

}  // namespace mixedlab
