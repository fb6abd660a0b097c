#include "mixedlab/quadrature.hpp"

#include <cmath>

namespace mixedlab {

const QuadratureRule& triangle_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.degree = 4;
    constexpr double a1 = 0.44594849091596488632;
    constexpr double w1 = 0.22338158967801146570;
    constexpr double a2 = 0.091576213509770743460;
    constexpr double w2 = 0.10995174365532186764;
    const double b1 = 1.0 - 2.0 * a1;
    const double b2 = 1.0 - 2.0 * a2;
    r.points = {{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    r.weights = {w1, w1, w1, w2, w2, w2};
    for (double& w : r.weights) w *= 0.5;
    return r;
  }();
  return rule;
}

const LineRule& line_rule() {
  static const LineRule rule = [] {
    LineRule r;
    const double d = 0.5 * std::sqrt(0.6);
    r.points = {0.5 - d, 0.5, 0.5 + d};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

}  // namespace mixedlab
