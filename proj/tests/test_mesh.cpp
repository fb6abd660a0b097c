#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mixedlab/mesh.hpp"

using namespace mixedlab;

TEST(Mesh, RejectsZeroSubdivisions) {
  EXPECT_THROW(build_unit_square_mesh(0), std::invalid_argument);
}

TEST(Mesh, EntityCounts) {
  struct Case {
    int n, v, c, e;
  };
  for (const Case& k : {Case{1, 4, 2, 5}, Case{4, 25, 32, 56}, Case{32, 1089, 2048, 3136}}) {
    const Mesh m = build_unit_square_mesh(k.n);
    EXPECT_EQ(m.num_vertices(), k.v) << "n=" << k.n;
    EXPECT_EQ(m.num_cells(), k.c) << "n=" << k.n;
    EXPECT_EQ(m.num_edges(), k.e) << "n=" << k.n;
  }
}

TEST(Mesh, EulerRelationAndAreas) {
  for (int n = 1; n <= 32; ++n) {
    const Mesh m = build_unit_square_mesh(n);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_cells(), 1);
    EXPECT_EQ(m.num_edges(), 3 * n * n + 2 * n);
    double total = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) {
      ASSERT_GT(m.cell_area(c), 0.0);
      total += m.cell_area(c);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(static_cast<int>(m.boundary_facets.size()), 4 * n);
  }
}

TEST(Mesh, EdgeSharingAndOrientation) {
  const Mesh m = build_unit_square_mesh(5);
  std::vector<int> count(m.num_edges(), 0);
  std::vector<int> sign_sum(m.num_edges(), 0);
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      ++count[m.cell_edges[c][k]];
      sign_sum[m.cell_edges[c][k]] += m.cell_edge_signs[c][k];
    }
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    EXPECT_LT(m.edges[e][0], m.edges[e][1]);
    if (m.is_boundary_edge(e)) {
      EXPECT_EQ(count[e], 1);
    } else {
      EXPECT_EQ(count[e], 2);
      EXPECT_EQ(sign_sum[e], 0) << "edge " << e;
    }
  }
}

TEST(Mesh, OutwardSignMatchesGeometry) {
  const Mesh m = build_unit_square_mesh(3);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    const double cx = (m.vertices[t[0]].x + m.vertices[t[1]].x + m.vertices[t[2]].x) / 3.0;
    const double cy = (m.vertices[t[0]].y + m.vertices[t[1]].y + m.vertices[t[2]].y) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const int e = m.cell_edges[c][k];
      const Point mid = m.edge_midpoint(e);
      const Point nrm = m.edge_normal(e);
      const double outward = (mid.x - cx) * nrm.x + (mid.y - cy) * nrm.y;
      EXPECT_EQ(outward > 0 ? 1 : -1, m.cell_edge_signs[c][k]);
    }
  }
}

TEST(Mesh, AllBoundaryTagging) {
  const Mesh m = tag_boundary(build_unit_square_mesh(1), TagScheme::AllBoundary);
  EXPECT_EQ(m.facets_with_tag(BoundaryTag::AllBoundary).size(), 4u);
}

TEST(Mesh, BiotSplitPartitionsBoundary) {
  for (int n : {2, 4, 7}) {
    const Mesh m = tag_boundary(build_unit_square_mesh(n), TagScheme::BiotSplit);
    const auto gu = m.facets_with_tag(BoundaryTag::GammaU);
    const auto gs = m.facets_with_tag(BoundaryTag::GammaSigma);
    EXPECT_EQ(static_cast<int>(gu.size()), 2 * n);
    EXPECT_EQ(static_cast<int>(gs.size()), 2 * n);
    std::set<int> all(gu.begin(), gu.end());
    all.insert(gs.begin(), gs.end());
    EXPECT_EQ(all.size(), m.boundary_facets.size());
    for (int e : gu) {
      const Point mid = m.edge_midpoint(e);
      EXPECT_TRUE(mid.x == 0.0 || mid.x == 1.0);
    }
  }
}

TEST(Mesh, ListingHasOneRecordPerEntity) {
  const Mesh m = tag_boundary(build_unit_square_mesh(2), TagScheme::BiotSplit);
  std::ostringstream out;
  write_mesh_listing(m, out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0, gamma_u = 0;
  while (std::getline(in, line)) {
    ++lines;
    gamma_u += line.find("GammaU") != std::string::npos;
  }
  EXPECT_EQ(lines, m.num_vertices() + m.num_cells() + m.num_edges());
  EXPECT_EQ(gamma_u, 4);
}
