#include "mixedlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace mixedlab {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "Interior";
    case BoundaryTag::GammaU: return "GammaU";
    case BoundaryTag::GammaSigma: return "GammaSigma";
    case BoundaryTag::AllBoundary: return "AllBoundary";
  }
  return "?";
}

double Mesh::cell_area(int cell) const {
  const auto& c = cells[cell];
  const Point& a = vertices[c[0]];
  const Point& b = vertices[c[1]];
  const Point& d = vertices[c[2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

double Mesh::cell_diameter(int cell) const {
  double diam = 0.0;
  for (int k = 0; k < 3; ++k) diam = std::max(diam, edge_length(cell_edges[cell][k]));
  return diam;
}

double Mesh::edge_length(int edge) const {
  const Point& a = vertices[edges[edge][0]];
  const Point& b = vertices[edges[edge][1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

Point Mesh::edge_midpoint(int edge) const {
  const Point& a = vertices[edges[edge][0]];
  const Point& b = vertices[edges[edge][1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

Point Mesh::edge_normal(int edge) const {
  const Point& a = vertices[edges[edge][0]];
  const Point& b = vertices[edges[edge][1]];
  const double len = edge_length(edge);
  return {(b.y - a.y) / len, -(b.x - a.x) / len};
}

std::vector<int> Mesh::facets_with_tag(BoundaryTag tag) const {
  std::vector<int> out;
  for (int e : boundary_facets) {
    if (edge_tags[e] == tag) out.push_back(e);
  }
  return out;
}

Mesh build_unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
  Mesh mesh;
  mesh.n = n;
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v0 = vid(i, j), v1 = vid(i + 1, j), v2 = vid(i, j + 1), v3 = vid(i + 1, j + 1);
      cells.push_back({v0, v1, v3});
      cells.push_back({v0, v3, v2});
    }
  }
  return make_mesh(std::move(mesh.vertices), std::move(cells), n);
}

Mesh make_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells, int n) {
  Mesh mesh;
  mesh.n = n;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  std::vector<std::array<int, 2>> all;
  all.reserve(3 * mesh.cells.size());
  for (const auto& c : mesh.cells) {
    for (int k = 0; k < 3; ++k) {
      const int a = c[(k + 1) % 3], b = c[(k + 2) % 3];
      all.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  mesh.edges = std::move(all);

  const int num_edges = mesh.num_edges();
  mesh.edge_cells.assign(num_edges, {-1, -1});
  mesh.cell_edges.resize(mesh.cells.size());
  mesh.cell_edge_signs.resize(mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.cells[c][(k + 1) % 3], b = mesh.cells[c][(k + 2) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const int e = static_cast<int>(
          std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key) - mesh.edges.begin());
      mesh.cell_edges[c][k] = e;
      // Counterclockwise traversal a -> b has outward normal = tangent rotated clockwise.
      mesh.cell_edge_signs[c][k] = a < b ? 1 : -1;
      auto& inc = mesh.edge_cells[e];
      (inc[0] < 0 ? inc[0] : inc[1]) = c;
    }
  }

  mesh.edge_tags.assign(num_edges, BoundaryTag::Interior);
  for (int e = 0; e < num_edges; ++e) {
    if (mesh.edge_cells[e][1] < 0) {
      mesh.boundary_facets.push_back(e);
      mesh.edge_tags[e] = BoundaryTag::AllBoundary;
    }
  }
  return mesh;
}

Mesh tag_boundary(const Mesh& mesh, TagScheme scheme) {
  Mesh out = mesh;
  out.scheme = scheme;
  for (int e : out.boundary_facets) {
    if (scheme == TagScheme::AllBoundary) {
      out.edge_tags[e] = BoundaryTag::AllBoundary;
      continue;
    }
    const Point& a = out.vertices[out.edges[e][0]];
    const Point& b = out.vertices[out.edges[e][1]];
    auto on_side = [](double x) { return x == 0.0 || x == 1.0; };
    const bool vertical = on_side(a.x) && on_side(b.x) && a.x == b.x;
    out.edge_tags[e] = vertical ? BoundaryTag::GammaU : BoundaryTag::GammaSigma;
  }
  return out;
}

void write_mesh_listing(const Mesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << "vertex " << v << ' ' << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << '\n';
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    out << "cell " << c << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    out << "edge " << e << ' ' << mesh.edges[e][0] << ' ' << mesh.edges[e][1] << ' '
        << to_string(mesh.edge_tags[e]) << '\n';
  }
}

}  // namespace mixedlab
