#pragma once

#include <array>
#include <vector>

namespace mixedlab {

/// Rule on the reference triangle; points are barycentric coordinates and the
/// weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric six-point rule, exact for polynomials of total degree 4.
const QuadratureRule& triangle_rule();

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Three-point Gauss-Legendre rule, exact up to degree 5.
const LineRule& line_rule();

}  // namespace mixedlab
