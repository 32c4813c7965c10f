#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "awstokes/quadrature.hpp"
#include "awstokes/types.hpp"

namespace awstokes {

enum class Domain { Square, LShape, Slit };

Domain parse_domain(std::string_view tag);
std::string_view domain_name(Domain d);
/// Exact area of the benchmark domain: 1, 3 or 4.
double domain_area(Domain d);

enum class RefinementTag { None, Red, Green, Blue };

struct Triangle {
  std::array<int, 3> v{};  ///< counter-clockwise
  std::array<int, 3> e{};  ///< e[i] is opposite v[i]
  RefinementTag tag = RefinementTag::None;
  int parent = -1;
};

/// Edge with a fixed global orientation from v[0] to v[1], v[0] < v[1].
struct Edge {
  std::array<int, 2> v{};
  std::array<int, 2> adj{-1, -1};  ///< adj[1] == -1 on the boundary
  bool boundary = false;
  double length = 0.0;
  Vec2 normal = Vec2::Zero();  ///< tangent (v0 -> v1) rotated clockwise
};

/// Conforming triangulation with edge topology.
///
/// Vertices are topological: along the slit of the slit domain every point
/// has one vertex record per side, so the two sides share no edges.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  Domain domain = Domain::Square;
  int level = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  TriangleGeom geometry(int t) const;
  double diameter(int t) const { return geometry(t).diameter(); }
  /// True if local edge i of triangle t runs against the global edge orientation.
  bool edge_reversed(int t, int i) const;
  std::array<bool, 3> edge_orientation(int t) const;

  double total_area() const;
  double min_angle() const;
  /// Vertex lies on at least one boundary edge.
  std::vector<bool> boundary_vertices() const;

  /// Builds edges and adjacency from a triangle list. Clockwise triangles are reoriented.
  static Mesh from_triangles(std::vector<Point> vertices, std::vector<Triangle> triangles, Domain domain, int level);
};

Mesh build_initial_mesh(Domain domain);

/// Red refinement of every marked triangle plus green/blue closure.
Mesh refine(const Mesh& mesh, const std::set<int>& marked);
Mesh refine_uniform(const Mesh& mesh);

/// Checks edge/adjacency consistency, orientation and conformity. Returns an
/// empty string when the mesh is valid, a description of the first violation otherwise.
std::string check_mesh(const Mesh& mesh);

/// Plain text format: "vertices N triangles T edges E" followed by one line per entity.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is, Domain domain = Domain::Square);

}  // namespace awstokes
