#include "mixedlab/forms.hpp"

#include <stdexcept>
#include <string>

#include "mixedlab/quadrature.hpp"

namespace mixedlab {

namespace {

bool is_scalar(const FunctionSpace& s) { return s.element().value_kind == ValueKind::Scalar; }

void require_scalar(const FunctionSpace& s, const char* op) {
  if (!is_scalar(s)) {
    throw std::invalid_argument(std::string(op) + ": expected a scalar space, got " +
                                to_string(s.family()));
  }
}

void require_same_mesh(const FunctionSpace& a, const FunctionSpace& b, const char* op) {
  if (!a.same_mesh(b)) throw std::invalid_argument(std::string(op) + ": spaces live on different meshes");
}

// Cell-by-cell assembly of a bilinear form. `kernel(test_table, trial_table, i, j)`
// returns the integrand at one quadrature point.
template <typename Kernel>
SparseMatrix assemble_cells(const FunctionSpace& rows, const FunctionSpace& cols, Kernel kernel) {
  const Mesh& mesh = rows.mesh();
  const QuadratureRule& rule = triangle_rule();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_cells()) * rows.local_size() * cols.local_size());
  std::vector<double> local;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis rb(mesh, c, rows.family());
    const LocalBasis cb(mesh, c, cols.family());
    const int nr = rb.size(), nc = cb.size();
    local.assign(static_cast<std::size_t>(nr) * nc, 0.0);
    const double jac = 2.0 * rb.geometry().area;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const BasisTable rt = rb.evaluate(rule.points[q]);
      const BasisTable ct = cb.evaluate(rule.points[q]);
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nc; ++j) local[i * nc + j] += w * kernel(rt, ct, i, j);
      }
    }
    const auto rd = rows.cell_dofs(c);
    const auto cd = cols.cell_dofs(c);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) {
        if (local[i * nc + j] != 0.0) trip.emplace_back(rd[i], cd[j], local[i * nc + j]);
      }
    }
  }
  SparseMatrix out(rows.dof_count(), cols.dof_count());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::Matrix2d sym(const Eigen::Matrix2d& g) { return 0.5 * (g + g.transpose()); }

}  // namespace

SparseMatrix mass(const FunctionSpace& space, double weight) {
  if (is_scalar(space)) {
    return assemble_cells(space, space, [weight](const BasisTable& r, const BasisTable& c, int i, int j) {
      return weight * r.values[i] * c.values[j];
    });
  }
  return assemble_cells(space, space, [weight](const BasisTable& r, const BasisTable& c, int i, int j) {
    return weight * r.vector_values[i].dot(c.vector_values[j]);
  });
}

SparseMatrix cross_mass(const FunctionSpace& row_space, const FunctionSpace& col_space) {
  require_scalar(row_space, "cross_mass");
  require_scalar(col_space, "cross_mass");
  require_same_mesh(row_space, col_space, "cross_mass");
  return assemble_cells(row_space, col_space, [](const BasisTable& r, const BasisTable& c, int i, int j) {
    return r.values[i] * c.values[j];
  });
}

SparseMatrix strain_stiffness(const FunctionSpace& space, double coefficient) {
  if (space.family() != Family::P2vec) {
    throw std::invalid_argument("strain_stiffness: expected a continuous vector space, got " +
                                to_string(space.family()));
  }
  return assemble_cells(space, space, [coefficient](const BasisTable& r, const BasisTable& c, int i, int j) {
    return coefficient * sym(r.vector_gradients[i]).cwiseProduct(sym(c.vector_gradients[j])).sum();
  });
}

SparseMatrix div_coupling(const FunctionSpace& vector_space, const FunctionSpace& scalar_space) {
  require_scalar(scalar_space, "div_coupling");
  require_same_mesh(vector_space, scalar_space, "div_coupling");
  if (is_scalar(vector_space)) {
    throw std::invalid_argument("div_coupling: column space must be vector valued");
  }
  return assemble_cells(scalar_space, vector_space, [](const BasisTable& r, const BasisTable& c, int i, int j) {
    return r.values[i] * c.divergences[j];
  });
}

SparseMatrix divdiv(const FunctionSpace& space) {
  if (!is_hdiv(space.family())) {
    throw std::invalid_argument("divdiv: expected an H(div) space, got " + to_string(space.family()));
  }
  return assemble_cells(space, space, [](const BasisTable& r, const BasisTable& c, int i, int j) {
    return r.divergences[i] * c.divergences[j];
  });
}

SparseMatrix dg_laplacian(const FunctionSpace& space, const std::vector<int>& dirichlet_facets,
                          double weight, FacetSize facet_size) {
  require_scalar(space, "dg_laplacian");
  const Mesh& mesh = space.mesh();
  SparseMatrix out = assemble_cells(space, space, [](const BasisTable& r, const BasisTable& c, int i, int j) {
    return r.gradients[i].dot(c.gradients[j]);
  });

  auto facet_h = [&](int e) {
    if (facet_size == FacetSize::EdgeLength) return mesh.edge_length(e);
    const auto& inc = mesh.edge_cells[e];
    if (inc[1] < 0) return mesh.cell_diameter(inc[0]);
    return 0.5 * (mesh.cell_diameter(inc[0]) + mesh.cell_diameter(inc[1]));
  };

  const LineRule& line = line_rule();
  Triplets trip;
  // Traces of the basis functions of `cell` along edge e, with sign applied.
  auto traces = [&](int cell, int e, double sign, std::vector<int>& dofs,
                    std::vector<std::vector<double>>& vals) {
    const LocalBasis basis(mesh, cell, space.family());
    const Point a = mesh.vertices[mesh.edges[e][0]];
    const Point b = mesh.vertices[mesh.edges[e][1]];
    const auto cd = space.cell_dofs(cell);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      const BasisTable t =
          basis.evaluate(basis.geometry().barycentric({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}));
      for (int i = 0; i < basis.size(); ++i) vals[q].push_back(sign * t.values[i]);
    }
    dofs.insert(dofs.end(), cd.begin(), cd.end());
  };

  std::vector<char> dirichlet(mesh.num_edges(), 0);
  for (int e : dirichlet_facets) {
    if (e < 0 || e >= mesh.num_edges() || !mesh.is_boundary_edge(e)) {
      throw std::invalid_argument("dg_laplacian: facet " + std::to_string(e) + " is not a boundary facet");
    }
    dirichlet[e] = 1;
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const bool interior = !mesh.is_boundary_edge(e);
    if (!interior && !dirichlet[e]) continue;
    std::vector<int> dofs;
    std::vector<std::vector<double>> vals(line.points.size());
    traces(mesh.edge_cells[e][0], e, 1.0, dofs, vals);
    if (interior) traces(mesh.edge_cells[e][1], e, -1.0, dofs, vals);
    const double len = mesh.edge_length(e);
    const double penalty = len / facet_h(e);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      for (std::size_t j = 0; j < dofs.size(); ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < line.points.size(); ++q) acc += line.weights[q] * vals[q][i] * vals[q][j];
        if (acc != 0.0) trip.emplace_back(dofs[i], dofs[j], penalty * acc);
      }
    }
  }
  SparseMatrix jumps(space.dof_count(), space.dof_count());
  jumps.setFromTriplets(trip.begin(), trip.end());
  SparseMatrix total = out + jumps;
  total *= weight;
  return total;
}

Eigen::VectorXd basis_integrals(const FunctionSpace& space) {
  require_scalar(space, "basis_integrals");
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = triangle_rule();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(space.dof_count());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalBasis basis(mesh, c, space.family());
    const auto cd = space.cell_dofs(c);
    const double jac = 2.0 * basis.geometry().area;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const BasisTable t = basis.evaluate(rule.points[q]);
      for (int i = 0; i < basis.size(); ++i) m(cd[i]) += rule.weights[q] * jac * t.values[i];
    }
  }
  return m;
}

SparseMatrix mean_projection(const FunctionSpace& space) {
  const Eigen::VectorXd m = basis_integrals(space);
  const double domain = m.sum();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(m.size()) * m.size());
  for (int j = 0; j < m.size(); ++j) {
    for (int i = 0; i < m.size(); ++i) {
      const double v = m(i) * m(j) / domain;
      if (v != 0.0) trip.emplace_back(i, j, v);
    }
  }
  SparseMatrix out(m.size(), m.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace mixedlab
