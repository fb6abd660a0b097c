#include "mixedlab/sparse.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixedlab {

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

double symmetry_defect(const SparseMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  const SparseMatrix diff = a - SparseMatrix(a.transpose());
  return max_abs(diff) / scale;
}

namespace {

std::vector<int> keep_map(int size, const std::vector<int>& constrained) {
  std::vector<int> map(size, 0);
  for (int i : constrained) {
    if (i < 0 || i >= size) {
      throw std::out_of_range("eliminate: index " + std::to_string(i) + " outside [0, " +
                              std::to_string(size) + ")");
    }
    map[i] = -1;
  }
  int next = 0;
  for (int& m : map) m = (m == 0) ? next++ : -1;
  return map;
}

}  // namespace

SparseMatrix eliminate(const SparseMatrix& a, const std::vector<int>& constrained) {
  return eliminate(a, constrained, constrained);
}

SparseMatrix eliminate(const SparseMatrix& a, const std::vector<int>& constrained_rows,
                       const std::vector<int>& constrained_cols) {
  const std::vector<int> rmap = keep_map(static_cast<int>(a.rows()), constrained_rows);
  const std::vector<int> cmap = keep_map(static_cast<int>(a.cols()), constrained_cols);
  int nr = 0, nc = 0;
  for (int r : rmap) nr += r >= 0;
  for (int c : cmap) nc += c >= 0;
  Triplets trip;
  trip.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int r = rmap[it.row()], c = cmap[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(nr, nc);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_market(a, out);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (line.rfind("%%MatrixMarket", 0) != 0) throw std::runtime_error("not a Matrix Market file");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream header(line);
  long rows = 0, cols = 0, nnz = 0;
  header >> rows >> cols >> nnz;
  Triplets trip;
  trip.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    long r, c;
    double v;
    in >> r >> c >> v;
    trip.emplace_back(static_cast<int>(r - 1), static_cast<int>(c - 1), v);
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace mixedlab
