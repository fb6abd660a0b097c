#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mixedlab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { Interior, GammaU, GammaSigma, AllBoundary };
enum class TagScheme { BiotSplit, AllBoundary };

std::string to_string(BoundaryTag tag);

/// Structured triangulation of the unit square.
///
/// Vertices are numbered lexicographically (x fastest). Every grid square is
/// split along its lower-left to upper-right diagonal into two
/// counterclockwise triangles. Edges are oriented from the lower to the higher
/// vertex index; the global unit normal of an edge is its tangent rotated
/// clockwise. Local edge k of a cell is the edge opposite local vertex k.
struct Mesh {
  int n = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> cell_edges;
  /// +1 when the cell's outward normal on the local edge agrees with the
  /// global edge normal, -1 otherwise.
  std::vector<std::array<int, 3>> cell_edge_signs;
  /// Incident cells per edge; the second entry is -1 on boundary edges.
  std::vector<std::array<int, 2>> edge_cells;
  std::vector<int> boundary_facets;
  /// One tag per edge. Interior edges carry BoundaryTag::Interior.
  std::vector<BoundaryTag> edge_tags;
  std::optional<TagScheme> scheme;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double cell_area(int cell) const;
  double cell_diameter(int cell) const;
  double edge_length(int edge) const;
  Point edge_midpoint(int edge) const;
  /// Global unit normal of an edge.
  Point edge_normal(int edge) const;
  bool is_boundary_edge(int edge) const { return edge_cells[edge][1] < 0; }

  /// Boundary edges carrying the given tag.
  std::vector<int> facets_with_tag(BoundaryTag tag) const;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Builds the n x n structured triangulation. Throws std::invalid_argument for n < 1.
Mesh build_unit_square_mesh(int n);

/// Derives edges, incidences and boundary facets from counterclockwise cells.
Mesh make_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells, int n = 0);

/// Returns a copy of the mesh with boundary edges tagged by the scheme.
/// BiotSplit: GammaU on x = 0 or x = 1, GammaSigma elsewhere.
Mesh tag_boundary(const Mesh& mesh, TagScheme scheme);

/// Plain-text listing, one record per line.
void write_mesh_listing(const Mesh& mesh, std::ostream& out);

}  // namespace mixedlab
