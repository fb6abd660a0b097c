#include "mixedlab/elements.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixedlab/quadrature.hpp"

namespace mixedlab {

ElementFamily element_family(Family family) {
  switch (family) {
    case Family::P0: return {family, ValueKind::Scalar, Continuity::Discontinuous};
    case Family::P1dg: return {family, ValueKind::Scalar, Continuity::Discontinuous};
    case Family::P1: return {family, ValueKind::Scalar, Continuity::C0};
    case Family::P2vec: return {family, ValueKind::Vector, Continuity::C0};
    case Family::RT0:
    case Family::RT1:
    case Family::BDM1: return {family, ValueKind::Vector, Continuity::Hdiv};
  }
  throw std::invalid_argument("unknown element family");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::P0: return "P0";
    case Family::P1dg: return "P1dg";
    case Family::P1: return "P1";
    case Family::P2vec: return "P2vec";
    case Family::RT0: return "RT0";
    case Family::RT1: return "RT1";
    case Family::BDM1: return "BDM1";
  }
  return "?";
}

int local_dimension(Family family) {
  switch (family) {
    case Family::P0: return 1;
    case Family::P1dg:
    case Family::P1:
    case Family::RT0: return 3;
    case Family::BDM1: return 6;
    case Family::RT1: return 8;
    case Family::P2vec: return 12;
  }
  return 0;
}

bool is_hdiv(Family family) { return element_family(family).continuity == Continuity::Hdiv; }

Point CellGeometry::map(const Barycentric& b) const {
  return {b[0] * vertices[0].x + b[1] * vertices[1].x + b[2] * vertices[2].x,
          b[0] * vertices[0].y + b[1] * vertices[1].y + b[2] * vertices[2].y};
}

Barycentric CellGeometry::barycentric(const Point& p) const {
  const Eigen::Vector2d d(p.x - vertices[0].x, p.y - vertices[0].y);
  const double l1 = grad_bary[1].dot(d);
  const double l2 = grad_bary[2].dot(d);
  return {1.0 - l1 - l2, l1, l2};
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  CellGeometry g;
  for (int k = 0; k < 3; ++k) g.vertices[k] = mesh.vertices[mesh.cells[cell][k]];
  Eigen::Matrix2d jac;
  jac << g.vertices[1].x - g.vertices[0].x, g.vertices[2].x - g.vertices[0].x,
      g.vertices[1].y - g.vertices[0].y, g.vertices[2].y - g.vertices[0].y;
  g.area = 0.5 * jac.determinant();
  const Eigen::Matrix2d inv = jac.inverse();
  g.grad_bary[1] = inv.row(0).transpose();
  g.grad_bary[2] = inv.row(1).transpose();
  g.grad_bary[0] = -(g.grad_bary[1] + g.grad_bary[2]);
  return g;
}

namespace {

int edge_moments(Family family) {
  switch (family) {
    case Family::RT0: return 1;
    case Family::BDM1:
    case Family::RT1: return 2;
    default: return 0;
  }
}

// Vector monomials in scaled local coordinates; divergences are with respect
// to physical coordinates.
void vector_monomials(Family family, double xi, double eta, double scale,
                      std::vector<Eigen::Vector2d>& val, std::vector<double>& div) {
  val.clear();
  div.clear();
  const double inv = 1.0 / scale;
  val.emplace_back(1.0, 0.0);
  div.push_back(0.0);
  val.emplace_back(0.0, 1.0);
  div.push_back(0.0);
  if (family == Family::RT0) {
    val.emplace_back(xi, eta);
    div.push_back(2.0 * inv);
    return;
  }
  val.emplace_back(xi, 0.0);
  div.push_back(inv);
  val.emplace_back(eta, 0.0);
  div.push_back(0.0);
  val.emplace_back(0.0, xi);
  div.push_back(0.0);
  val.emplace_back(0.0, eta);
  div.push_back(inv);
  if (family == Family::RT1) {
    val.emplace_back(xi * xi, xi * eta);
    div.push_back(3.0 * xi * inv);
    val.emplace_back(xi * eta, eta * eta);
    div.push_back(3.0 * eta * inv);
  }
}

double legendre(int j, double s) { return j == 0 ? 1.0 : 2.0 * s - 1.0; }

// Applies the H(div) DOF functionals of one cell to a vector field.
template <typename Field>
Eigen::VectorXd hdiv_functionals(const Mesh& mesh, int cell, Family family, const Field& field) {
  const int npe = edge_moments(family);
  Eigen::VectorXd out(local_dimension(family));
  const LineRule& line = line_rule();
  for (int k = 0; k < 3; ++k) {
    const int e = mesh.cell_edges[cell][k];
    const Point a = mesh.vertices[mesh.edges[e][0]];
    const Point b = mesh.vertices[mesh.edges[e][1]];
    const Point nrm = mesh.edge_normal(e);
    for (int j = 0; j < npe; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const double s = line.points[q];
        const Point x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
        const Eigen::Vector2d v = field(x);
        acc += line.weights[q] * (v.x() * nrm.x + v.y() * nrm.y) * legendre(j, s);
      }
      out(k * npe + j) = acc;
    }
  }
  if (family == Family::RT1) {
    const CellGeometry g = cell_geometry(mesh, cell);
    const QuadratureRule& rule = triangle_rule();
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      mean += 2.0 * rule.weights[q] * field(g.map(rule.points[q]));
    }
    out(6) = mean.x();
    out(7) = mean.y();
  }
  return out;
}

}  // namespace

LocalBasis::LocalBasis(const Mesh& mesh, int cell, Family family)
    : family_(family), geom_(cell_geometry(mesh, cell)) {
  if (!is_hdiv(family)) return;
  centre_ = geom_.map({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  scale_ = std::sqrt(2.0 * geom_.area);
  const int dim = local_dimension(family);
  Eigen::MatrixXd vander(dim, dim);
  std::vector<Eigen::Vector2d> val;
  std::vector<double> div;
  for (int m = 0; m < dim; ++m) {
    auto monomial = [&](const Point& x) {
      vector_monomials(family, (x.x - centre_.x) / scale_, (x.y - centre_.y) / scale_, scale_,
                       val, div);
      return val[m];
    };
    vander.col(m) = hdiv_functionals(mesh, cell, family, monomial);
  }
  coeffs_ = vander.inverse();
}

BasisTable LocalBasis::evaluate(const Barycentric& b) const {
  BasisTable t;
  const auto& gb = geom_.grad_bary;
  switch (family_) {
    case Family::P0:
      t.values = {1.0};
      t.gradients = {Eigen::Vector2d::Zero()};
      break;
    case Family::P1dg:
    case Family::P1:
      t.values = {b[0], b[1], b[2]};
      t.gradients = {gb[0], gb[1], gb[2]};
      break;
    case Family::P2vec: {
      std::array<double, 6> phi;
      std::array<Eigen::Vector2d, 6> grad;
      for (int k = 0; k < 3; ++k) {
        phi[k] = b[k] * (2.0 * b[k] - 1.0);
        grad[k] = (4.0 * b[k] - 1.0) * gb[k];
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        phi[3 + k] = 4.0 * b[i] * b[j];
        grad[3 + k] = 4.0 * (b[i] * gb[j] + b[j] * gb[i]);
      }
      t.vector_values.resize(12);
      t.vector_gradients.resize(12);
      t.divergences.resize(12);
      for (int a = 0; a < 6; ++a) {
        for (int comp = 0; comp < 2; ++comp) {
          const int i = 2 * a + comp;
          t.vector_values[i] = Eigen::Vector2d::Zero();
          t.vector_values[i](comp) = phi[a];
          t.vector_gradients[i] = Eigen::Matrix2d::Zero();
          t.vector_gradients[i].row(comp) = grad[a].transpose();
          t.divergences[i] = grad[a](comp);
        }
      }
      break;
    }
    case Family::RT0:
    case Family::RT1:
    case Family::BDM1: {
      const Point x = geom_.map(b);
      std::vector<Eigen::Vector2d> val;
      std::vector<double> div;
      vector_monomials(family_, (x.x - centre_.x) / scale_, (x.y - centre_.y) / scale_, scale_,
                       val, div);
      const int dim = size();
      t.vector_values.assign(dim, Eigen::Vector2d::Zero());
      t.divergences.assign(dim, 0.0);
      for (int i = 0; i < dim; ++i) {
        for (int m = 0; m < dim; ++m) {
          t.vector_values[i] += coeffs_(m, i) * val[m];
          t.divergences[i] += coeffs_(m, i) * div[m];
        }
      }
      break;
    }
  }
  return t;
}

BasisTable evaluate_basis(Family family, const Mesh& mesh, int cell, const Barycentric& point) {
  return LocalBasis(mesh, cell, family).evaluate(point);
}

FunctionSpace::FunctionSpace(MeshPtr mesh, Family family, std::optional<BoundaryTag> essential_tag)
    : mesh_(std::move(mesh)), element_(element_family(family)), essential_(essential_tag) {
  const Mesh& m = *mesh_;
  const int nc = m.num_cells(), ne = m.num_edges(), nv = m.num_vertices();
  const int ld = local_dimension(family);
  cell_dofs_.resize(static_cast<std::size_t>(nc) * ld);
  for (int c = 0; c < nc; ++c) {
    int* d = &cell_dofs_[static_cast<std::size_t>(c) * ld];
    const auto& cv = m.cells[c];
    const auto& ce = m.cell_edges[c];
    switch (family) {
      case Family::P0: d[0] = c; break;
      case Family::P1dg:
        for (int k = 0; k < 3; ++k) d[k] = 3 * c + k;
        break;
      case Family::P1:
        for (int k = 0; k < 3; ++k) d[k] = cv[k];
        break;
      case Family::P2vec:
        for (int a = 0; a < 6; ++a) {
          const int node = a < 3 ? cv[a] : nv + ce[a - 3];
          d[2 * a] = 2 * node;
          d[2 * a + 1] = 2 * node + 1;
        }
        break;
      case Family::RT0:
        for (int k = 0; k < 3; ++k) d[k] = ce[k];
        break;
      case Family::BDM1:
        for (int k = 0; k < 3; ++k) {
          d[2 * k] = 2 * ce[k];
          d[2 * k + 1] = 2 * ce[k] + 1;
        }
        break;
      case Family::RT1:
        for (int k = 0; k < 3; ++k) {
          d[2 * k] = 2 * ce[k];
          d[2 * k + 1] = 2 * ce[k] + 1;
        }
        d[6] = 2 * ne + 2 * c;
        d[7] = 2 * ne + 2 * c + 1;
        break;
    }
  }
  switch (family) {
    case Family::P0: dof_count_ = nc; break;
    case Family::P1dg: dof_count_ = 3 * nc; break;
    case Family::P1: dof_count_ = nv; break;
    case Family::P2vec: dof_count_ = 2 * (nv + ne); break;
    case Family::RT0: dof_count_ = ne; break;
    case Family::BDM1: dof_count_ = 2 * ne; break;
    case Family::RT1: dof_count_ = 2 * ne + 2 * nc; break;
  }

  if (!essential_) return;
  if (element_.continuity == Continuity::Discontinuous) {
    throw std::invalid_argument("make_space: essential boundary condition on discontinuous family " +
                                to_string(family));
  }
  const std::vector<int> facets = m.facets_with_tag(*essential_);
  if (facets.empty()) {
    throw std::invalid_argument("make_space: mesh has no boundary facet tagged " +
                                to_string(*essential_));
  }
  for (int e : facets) {
    switch (family) {
      case Family::P1:
        constrained_.push_back(m.edges[e][0]);
        constrained_.push_back(m.edges[e][1]);
        break;
      case Family::P2vec:
        for (int node : {m.edges[e][0], m.edges[e][1], nv + e}) {
          constrained_.push_back(2 * node);
          constrained_.push_back(2 * node + 1);
        }
        break;
      case Family::RT0: constrained_.push_back(e); break;
      case Family::BDM1:
      case Family::RT1:
        constrained_.push_back(2 * e);
        constrained_.push_back(2 * e + 1);
        break;
      default: break;
    }
  }
  std::sort(constrained_.begin(), constrained_.end());
  constrained_.erase(std::unique(constrained_.begin(), constrained_.end()), constrained_.end());
}

std::span<const int> FunctionSpace::cell_dofs(int cell) const {
  const int ld = local_size();
  return {cell_dofs_.data() + static_cast<std::size_t>(cell) * ld, static_cast<std::size_t>(ld)};
}

std::vector<int> FunctionSpace::free_dofs() const {
  std::vector<int> out;
  out.reserve(dof_count_ - constrained_.size());
  auto it = constrained_.begin();
  for (int i = 0; i < dof_count_; ++i) {
    if (it != constrained_.end() && *it == i) {
      ++it;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

FunctionSpace make_space(MeshPtr mesh, Family family, std::optional<BoundaryTag> essential_tag) {
  if (!mesh) throw std::invalid_argument("make_space: null mesh");
  return FunctionSpace(std::move(mesh), family, essential_tag);
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarField& field) {
  if (space.element().value_kind != ValueKind::Scalar) {
    throw std::invalid_argument("interpolate: scalar field into vector space");
  }
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = space.cell_dofs(c);
    const CellGeometry g = cell_geometry(mesh, c);
    if (space.family() == Family::P0) {
      const QuadratureRule& rule = triangle_rule();
      double mean = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        mean += 2.0 * rule.weights[q] * field(g.map(rule.points[q]));
      }
      out(dofs[0]) = mean;
    } else {
      for (int k = 0; k < 3; ++k) out(dofs[k]) = field(g.vertices[k]);
    }
  }
  return out;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorField& field) {
  if (space.element().value_kind != ValueKind::Vector) {
    throw std::invalid_argument("interpolate: vector field into scalar space");
  }
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = space.cell_dofs(c);
    if (space.family() == Family::P2vec) {
      const CellGeometry g = cell_geometry(mesh, c);
      for (int a = 0; a < 6; ++a) {
        Point x;
        if (a < 3) {
          x = g.vertices[a];
        } else {
          const Point& p = g.vertices[(a - 3 + 1) % 3];
          const Point& q = g.vertices[(a - 3 + 2) % 3];
          x = {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
        }
        const Eigen::Vector2d v = field(x);
        out(dofs[2 * a]) = v.x();
        out(dofs[2 * a + 1]) = v.y();
      }
    } else {
      const Eigen::VectorXd local = hdiv_functionals(mesh, c, space.family(), field);
      for (int i = 0; i < local.size(); ++i) out(dofs[i]) = local(i);
    }
  }
  return out;
}

}  // namespace mixedlab
