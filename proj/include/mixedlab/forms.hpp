#pragma once

#include <vector>

#include "mixedlab/elements.hpp"
#include "mixedlab/sparse.hpp"

namespace mixedlab {

/// Facet size used in the penalty terms of the DG Laplacian.
enum class FacetSize {
  EdgeLength,    ///< h_E = |E|
  CellDiameter,  ///< h_E = mean diameter of the adjacent cells
};

/// weight * int phi_j . phi_i (scalar or vector spaces).
SparseMatrix mass(const FunctionSpace& space, double weight = 1.0);

/// int phi_j psi_i with psi from the row space; both spaces scalar.
SparseMatrix cross_mass(const FunctionSpace& row_space, const FunctionSpace& col_space);

/// coefficient * int eps(phi_j) : eps(phi_i); pass 2 mu for the elastic form.
SparseMatrix strain_stiffness(const FunctionSpace& space, double coefficient);

/// int (div phi_j) psi_i; rows from the scalar space, columns from the vector space.
SparseMatrix div_coupling(const FunctionSpace& vector_space, const FunctionSpace& scalar_space);

/// int div phi_j div phi_i on an H(div) space.
SparseMatrix divdiv(const FunctionSpace& space);

/// weight * [ sum_K int grad p . grad q
///            + sum_{E interior} int_E h_E^{-1} [p][q]
///            + sum_{E in dirichlet_facets} int_E h_E^{-1} p q ].
SparseMatrix dg_laplacian(const FunctionSpace& space, const std::vector<int>& dirichlet_facets,
                          double weight = 1.0, FacetSize facet_size = FacetSize::CellDiameter);

/// Rank-one form m m^T / |Omega| with m_i = int phi_i.
SparseMatrix mean_projection(const FunctionSpace& space);

/// m_i = int phi_i.
Eigen::VectorXd basis_integrals(const FunctionSpace& space);

}  // namespace mixedlab
