#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedlab {

/// Compressed sparse storage shared by every assembled form.
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

/// max |A - A^T| / max |A| (0 for the zero matrix).
double symmetry_defect(const SparseMatrix& a);
double max_abs(const SparseMatrix& a);

/// Removes the listed rows and columns. Throws std::out_of_range on a bad index.
SparseMatrix eliminate(const SparseMatrix& a, const std::vector<int>& constrained);
/// Removes constrained rows and constrained columns independently.
SparseMatrix eliminate(const SparseMatrix& a, const std::vector<int>& constrained_rows,
                       const std::vector<int>& constrained_cols);

/// Matrix Market coordinate format, 17 significant digits.
void write_matrix_market(const SparseMatrix& a, std::ostream& out);
void write_matrix_market(const SparseMatrix& a, const std::string& path);
SparseMatrix read_matrix_market(std::istream& in);

}  // namespace mixedlab
