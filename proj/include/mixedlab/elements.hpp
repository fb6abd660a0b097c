#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixedlab/mesh.hpp"

namespace mixedlab {

enum class Family { P0, P1dg, P1, P2vec, RT0, RT1, BDM1 };
enum class ValueKind { Scalar, Vector };
enum class Continuity { Discontinuous, C0, Hdiv };

struct ElementFamily {
  Family family;
  ValueKind value_kind;
  Continuity continuity;
};

ElementFamily element_family(Family family);
std::string to_string(Family family);
/// Number of basis functions on one cell.
int local_dimension(Family family);
bool is_hdiv(Family family);

using Barycentric = std::array<double, 3>;

/// Affine map data for one triangle.
struct CellGeometry {
  std::array<Point, 3> vertices;
  double area = 0.0;
  /// Gradients of the barycentric coordinates.
  std::array<Eigen::Vector2d, 3> grad_bary;

  Point map(const Barycentric& b) const;
  Barycentric barycentric(const Point& p) const;
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// Basis values at one point. Scalar families fill `values` and `gradients`;
/// vector families fill `vector_values` and `divergences`, and C0 vector
/// families additionally fill `vector_gradients` (row = component).
struct BasisTable {
  std::vector<double> values;
  std::vector<Eigen::Vector2d> gradients;
  std::vector<Eigen::Vector2d> vector_values;
  std::vector<Eigen::Matrix2d> vector_gradients;
  std::vector<double> divergences;
};

/// Basis of one family on one physical cell.
///
/// H(div) bases are the dual bases of the edge moments
/// (1/|e|) int_e v.n_e L_j(s) ds, with n_e and the edge parameter s taken from
/// the global edge orientation, so normal traces agree between neighbours. RT1
/// adds the interior moments (1/|T|) int_T v.
class LocalBasis {
 public:
  LocalBasis(const Mesh& mesh, int cell, Family family);

  int size() const { return local_dimension(family_); }
  Family family() const { return family_; }
  const CellGeometry& geometry() const { return geom_; }
  BasisTable evaluate(const Barycentric& point) const;

 private:
  Family family_;
  CellGeometry geom_;
  Point centre_;
  double scale_ = 1.0;
  /// Column i holds the monomial coefficients of basis function i (H(div) only).
  Eigen::MatrixXd coeffs_;
};

BasisTable evaluate_basis(Family family, const Mesh& mesh, int cell, const Barycentric& point);

/// Element family bound to a mesh with its DOF map.
class FunctionSpace {
 public:
  FunctionSpace(MeshPtr mesh, Family family, std::optional<BoundaryTag> essential_tag);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const ElementFamily& element() const { return element_; }
  Family family() const { return element_.family; }
  int dof_count() const { return dof_count_; }
  int local_size() const { return local_dimension(element_.family); }
  std::span<const int> cell_dofs(int cell) const;
  const std::vector<int>& constrained_dofs() const { return constrained_; }
  std::vector<int> free_dofs() const;
  std::optional<BoundaryTag> essential_tag() const { return essential_; }
  bool same_mesh(const FunctionSpace& other) const { return mesh_ == other.mesh_; }

 private:
  MeshPtr mesh_;
  ElementFamily element_;
  int dof_count_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> constrained_;
  std::optional<BoundaryTag> essential_;
};

/// Throws std::invalid_argument for an essential tag on a discontinuous family
/// or when the mesh carries no edge with that tag.
FunctionSpace make_space(MeshPtr mesh, Family family,
                         std::optional<BoundaryTag> essential_tag = std::nullopt);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;

/// Applies the canonical DOF functionals: cell means (P0), nodal values
/// (P1, P1dg, P2vec components), edge normal moments and interior moments (H(div)).
Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarField& field);
Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorField& field);

}  // namespace mixedlab
