#include <gtest/gtest.h>

#include <random>

#include "mixedlab/elements.hpp"
#include "mixedlab/quadrature.hpp"

using namespace mixedlab;

namespace {

MeshPtr unit_mesh(int n, TagScheme scheme = TagScheme::AllBoundary) {
  return std::make_shared<const Mesh>(tag_boundary(build_unit_square_mesh(n), scheme));
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Vector field represented by H(div) coefficients, evaluated on one cell.
Eigen::Vector2d eval_vector(const FunctionSpace& s, const Eigen::VectorXd& coef, int cell,
                            const Barycentric& b, double* div = nullptr) {
  const BasisTable t = evaluate_basis(s.family(), s.mesh(), cell, b);
  const auto dofs = s.cell_dofs(cell);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double d = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    v += coef(dofs[i]) * t.vector_values[i];
    d += coef(dofs[i]) * t.divergences[i];
  }
  if (div) *div = d;
  return v;
}

}  // namespace

TEST(Quadrature, WeightsSumToReferenceArea) {
  const auto& r = triangle_rule();
  double sum = 0.0;
  for (double w : r.weights) sum += w;
  EXPECT_NEAR(sum, 0.5, 1e-15);
  EXPECT_GE(r.degree, 4);
}

TEST(Quadrature, ExactForMonomialsUpToDegreeFour) {
  const auto& r = triangle_rule();
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      double acc = 0.0;
      for (std::size_t q = 0; q < r.points.size(); ++q) {
        // reference vertices (0,0), (1,0), (0,1)
        const double x = r.points[q][1], y = r.points[q][2];
        acc += r.weights[q] * std::pow(x, a) * std::pow(y, b);
      }
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      EXPECT_NEAR(acc, exact, 1e-14) << "x^" << a << " y^" << b;
    }
  }
}

TEST(Elements, DofCountsMatchEntityCounts) {
  const MeshPtr m = unit_mesh(4);
  EXPECT_EQ(make_space(m, Family::RT0).dof_count(), 56);
  EXPECT_EQ(make_space(m, Family::P2vec).dof_count(), 162);
  EXPECT_EQ(make_space(m, Family::BDM1).dof_count(), 112);
  EXPECT_EQ(make_space(m, Family::RT1).dof_count(), 176);
  EXPECT_EQ(make_space(m, Family::P0).dof_count(), 32);
  EXPECT_EQ(make_space(m, Family::P1dg).dof_count(), 96);
  EXPECT_EQ(make_space(m, Family::P1).dof_count(), 25);
}

TEST(Elements, EssentialTagOnDiscontinuousFamilyThrows) {
  const MeshPtr m = unit_mesh(2);
  EXPECT_THROW(make_space(m, Family::P0, BoundaryTag::AllBoundary), std::invalid_argument);
  EXPECT_THROW(make_space(m, Family::P1dg, BoundaryTag::AllBoundary), std::invalid_argument);
}

TEST(Elements, EssentialTagMissingFromMeshThrows) {
  const MeshPtr m = unit_mesh(2, TagScheme::AllBoundary);
  EXPECT_THROW(make_space(m, Family::RT0, BoundaryTag::GammaU), std::invalid_argument);
}

TEST(Elements, ConstrainedDofsOnTaggedFacets) {
  const MeshPtr m = unit_mesh(4, TagScheme::BiotSplit);
  const FunctionSpace rt0 = make_space(m, Family::RT0, BoundaryTag::GammaU);
  EXPECT_EQ(rt0.constrained_dofs().size(), 8u);
  for (int d : rt0.constrained_dofs()) EXPECT_EQ(m->edge_tags[d], BoundaryTag::GammaU);
  const FunctionSpace p2 = make_space(m, Family::P2vec, BoundaryTag::GammaU);
  // two vertical sides: 5 vertices + 4 edge nodes each, two components
  EXPECT_EQ(p2.constrained_dofs().size(), 2u * 2u * 9u);
  const FunctionSpace bdm = make_space(m, Family::BDM1, BoundaryTag::GammaSigma);
  EXPECT_EQ(bdm.constrained_dofs().size(), 16u);
}

TEST(Elements, Rt0DivergenceIsEdgeOverArea) {
  const Mesh mesh = build_unit_square_mesh(1);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (const Barycentric& b : triangle_rule().points) {
      const BasisTable t = evaluate_basis(Family::RT0, mesh, c, b);
      for (int k = 0; k < 3; ++k) {
        const int e = mesh.cell_edges[c][k];
        const double expected = mesh.cell_edge_signs[c][k] * mesh.edge_length(e) / mesh.cell_area(c);
        EXPECT_NEAR(t.divergences[k], expected, 1e-12);
      }
    }
  }
}

TEST(Elements, P2PartitionOfUnity) {
  const Mesh mesh = build_unit_square_mesh(2);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const BasisTable t = evaluate_basis(Family::P2vec, mesh, trial % mesh.num_cells(), {1.0 - a - b, a, b});
    double sum = 0.0;
    for (int node = 0; node < 6; ++node) sum += t.vector_values[2 * node](0);
    EXPECT_NEAR(sum, 1.0, 1e-14);
  }
}

TEST(Elements, InterpolateConstantIntoP0) {
  const FunctionSpace s = make_space(unit_mesh(1), Family::P0);
  const Eigen::VectorXd v = interpolate(s, [](const Point&) { return 3.0; });
  ASSERT_EQ(v.size(), 2);
  EXPECT_DOUBLE_EQ(v(0), 3.0);
  EXPECT_DOUBLE_EQ(v(1), 3.0);
}

TEST(Elements, InterpolateLinearIntoP1) {
  const FunctionSpace s = make_space(unit_mesh(1), Family::P1);
  const Eigen::VectorXd v = interpolate(s, [](const Point& p) { return p.x; });
  ASSERT_EQ(v.size(), 4);
  EXPECT_DOUBLE_EQ(v(0), 0.0);
  EXPECT_DOUBLE_EQ(v(1), 1.0);
  EXPECT_DOUBLE_EQ(v(2), 0.0);
  EXPECT_DOUBLE_EQ(v(3), 1.0);
}

TEST(Elements, ConstantFieldInRt0IsDivergenceFree) {
  const FunctionSpace s = make_space(unit_mesh(2), Family::RT0);
  const Eigen::VectorXd v = interpolate(s, [](const Point&) { return Eigen::Vector2d(1.0, 0.0); });
  for (int c = 0; c < s.mesh().num_cells(); ++c) {
    for (const Barycentric& b : triangle_rule().points) {
      double div = 1.0;
      const Eigen::Vector2d val = eval_vector(s, v, c, b, &div);
      EXPECT_NEAR(div, 0.0, 1e-12);
      EXPECT_NEAR((val - Eigen::Vector2d(1.0, 0.0)).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Elements, RadialFieldHasDivergenceTwo) {
  for (Family f : {Family::RT0, Family::BDM1, Family::RT1}) {
    const FunctionSpace s = make_space(unit_mesh(3), f);
    const Eigen::VectorXd v = interpolate(s, [](const Point& p) { return Eigen::Vector2d(p.x, p.y); });
    for (int c = 0; c < s.mesh().num_cells(); ++c) {
      double div = 0.0;
      eval_vector(s, v, c, {0.2, 0.3, 0.5}, &div);
      EXPECT_NEAR(div, 2.0, 1e-12) << to_string(f);
    }
  }
}

TEST(Elements, InterpolationReproducesSpaceMembers) {
  struct Case {
    Family family;
    VectorField field;
  };
  const std::vector<Case> cases = {
      {Family::RT0, [](const Point& p) { return Eigen::Vector2d(2.0 + p.x, -1.0 + p.y); }},
      {Family::BDM1, [](const Point& p) { return Eigen::Vector2d(p.x + 2.0 * p.y, 3.0 * p.x - 1.0); }},
      {Family::RT1, [](const Point& p) { return Eigen::Vector2d(p.x * p.x + p.y, p.x * p.y - 2.0 * p.x); }},
      {Family::P2vec, [](const Point& p) { return Eigen::Vector2d(p.x * p.y, p.y * p.y - p.x); }},
  };
  for (const Case& k : cases) {
    const FunctionSpace s = make_space(unit_mesh(3), k.family);
    const Eigen::VectorXd v = interpolate(s, k.field);
    for (int c = 0; c < s.mesh().num_cells(); ++c) {
      const CellGeometry g = cell_geometry(s.mesh(), c);
      for (const Barycentric& b : triangle_rule().points) {
        const Eigen::Vector2d val = eval_vector(s, v, c, b);
        EXPECT_NEAR((val - k.field(g.map(b))).norm(), 0.0, 1e-12) << to_string(k.family);
      }
    }
  }
}

TEST(Elements, DivergenceLiesInMatchingDgSpace) {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  for (Family f : {Family::RT0, Family::BDM1, Family::RT1}) {
    const FunctionSpace s = make_space(unit_mesh(3), f);
    Eigen::VectorXd v(s.dof_count());
    for (int i = 0; i < v.size(); ++i) v(i) = nd(rng);
    const bool linear = f == Family::RT1;
    const auto& rule = triangle_rule();
    for (int c = 0; c < s.mesh().num_cells(); ++c) {
      // L2 projection of the divergence onto P0 or P1 on this cell.
      const int nq = static_cast<int>(rule.points.size());
      const int np = linear ? 3 : 1;
      Eigen::MatrixXd basis(nq, np);
      Eigen::VectorXd div(nq);
      for (int q = 0; q < nq; ++q) {
        eval_vector(s, v, c, rule.points[q], &div(q));
        if (linear) {
          for (int k = 0; k < 3; ++k) basis(q, k) = rule.points[q][k];
        } else {
          basis(q, 0) = 1.0;
        }
      }
      const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
      const Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
      const Eigen::VectorXd proj = gram.ldlt().solve(basis.transpose() * w.asDiagonal() * div);
      EXPECT_LE((basis * proj - div).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, div.cwiseAbs().maxCoeff()))
          << to_string(f) << " cell " << c;
    }
  }
}

TEST(Elements, NormalTraceContinuity) {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  const double gp = 0.5 / std::sqrt(3.0);
  for (Family f : {Family::RT0, Family::BDM1, Family::RT1}) {
    const FunctionSpace s = make_space(unit_mesh(4), f);
    const Mesh& mesh = s.mesh();
    Eigen::VectorXd v(s.dof_count());
    for (int i = 0; i < v.size(); ++i) v(i) = nd(rng);
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (mesh.is_boundary_edge(e)) continue;
      const Point a = mesh.vertices[mesh.edges[e][0]];
      const Point b = mesh.vertices[mesh.edges[e][1]];
      const Point nrm = mesh.edge_normal(e);
      for (double sp : {0.5 - gp, 0.5 + gp}) {
        const Point x{a.x + sp * (b.x - a.x), a.y + sp * (b.y - a.y)};
        double flux[2];
        for (int side = 0; side < 2; ++side) {
          const int c = mesh.edge_cells[e][side];
          const Eigen::Vector2d val = eval_vector(s, v, c, cell_geometry(mesh, c).barycentric(x));
          flux[side] = val.x() * nrm.x + val.y() * nrm.y;
        }
        EXPECT_NEAR(flux[0], flux[1], 1e-12) << to_string(f) << " edge " << e;
      }
    }
  }
}
