#include "awstokes/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace awstokes {

Domain parse_domain(std::string_view tag) {
  if (tag == "square") return Domain::Square;
  if (tag == "lshape") return Domain::LShape;
  if (tag == "slit") return Domain::Slit;
  throw InvalidArgument("unknown domain tag '" + std::string(tag) + "'");
}

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::Square: return "square";
    case Domain::LShape: return "lshape";
    case Domain::Slit: return "slit";
  }
  return "unknown";
}

double domain_area(Domain d) {
  switch (d) {
    case Domain::Square: return 1.0;
    case Domain::LShape: return 3.0;
    case Domain::Slit: return 4.0;
  }
  return 0.0;
}

TriangleGeom Mesh::geometry(int t) const {
  const auto& v = triangles[static_cast<std::size_t>(t)].v;
  return {{vertices[static_cast<std::size_t>(v[0])], vertices[static_cast<std::size_t>(v[1])],
           vertices[static_cast<std::size_t>(v[2])]}};
}

bool Mesh::edge_reversed(int t, int i) const {
  const Triangle& tri = triangles[static_cast<std::size_t>(t)];
  return tri.v[static_cast<std::size_t>((i + 1) % 3)] != edges[static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)])].v[0];
}

std::array<bool, 3> Mesh::edge_orientation(int t) const {
  return {edge_reversed(t, 0), edge_reversed(t, 1), edge_reversed(t, 2)};
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += geometry(t).area();
  return a;
}

double Mesh::min_angle() const {
  double m = std::numbers::pi;
  for (int t = 0; t < num_triangles(); ++t) m = std::min(m, geometry(t).min_angle());
  return m;
}

std::vector<bool> Mesh::boundary_vertices() const {
  std::vector<bool> on(vertices.size(), false);
  for (const Edge& e : edges)
    if (e.boundary) on[static_cast<std::size_t>(e.v[0])] = on[static_cast<std::size_t>(e.v[1])] = true;
  return on;
}

Mesh Mesh::from_triangles(std::vector<Point> vertices, std::vector<Triangle> triangles, Domain domain, int level) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.domain = domain;
  mesh.level = level;

  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    Triangle& tri = mesh.triangles[t];
    for (int idx : tri.v)
      if (idx < 0 || idx >= mesh.num_vertices()) throw GeometryError("triangle references a missing vertex");
    if (mesh.geometry(static_cast<int>(t)).signed_area() < 0.0) std::swap(tri.v[1], tri.v[2]);
    if (mesh.geometry(static_cast<int>(t)).signed_area() <= 0.0)
      throw GeometryError("degenerate triangle " + std::to_string(t));
    for (int i = 0; i < 3; ++i) {
      const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
      const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, mesh.num_edges());
      if (inserted) {
        Edge e;
        e.v = {key.first, key.second};
        e.adj = {static_cast<int>(t), -1};
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[static_cast<std::size_t>(it->second)];
        if (e.adj[1] != -1) throw GeometryError("edge shared by more than two triangles");
        e.adj[1] = static_cast<int>(t);
      }
      tri.e[static_cast<std::size_t>(i)] = it->second;
    }
  }
  for (Edge& e : mesh.edges) {
    e.boundary = e.adj[1] == -1;
    const Point d = mesh.vertices[static_cast<std::size_t>(e.v[1])] - mesh.vertices[static_cast<std::size_t>(e.v[0])];
    e.length = d.norm();
    e.normal = Vec2(d.y(), -d.x()) / e.length;
  }
  return mesh;
}

namespace {

std::vector<Triangle> make_triangles(std::initializer_list<std::array<int, 3>> list) {
  std::vector<Triangle> out;
  for (const auto& v : list) out.push_back(Triangle{v, {}, RefinementTag::None, -1});
  return out;
}

Mesh reset_lineage(Mesh m) {
  for (Triangle& t : m.triangles) {
    t.tag = RefinementTag::None;
    t.parent = -1;
  }
  m.level = 0;
  return m;
}

bool on_domain_boundary(Domain d, const Point& p) {
  constexpr double tol = 1e-12;
  auto near = [](double a, double b) { return std::abs(a - b) < tol; };
  auto within = [](double a, double lo, double hi) { return a > lo - tol && a < hi + tol; };
  switch (d) {
    case Domain::Square: return near(p.x(), 0) || near(p.x(), 1) || near(p.y(), 0) || near(p.y(), 1);
    case Domain::LShape:
      return near(p.x(), -1) || near(p.x(), 1) || near(p.y(), -1) || near(p.y(), 1) ||
             (near(p.x(), 0) && within(p.y(), 0, 1)) || (near(p.y(), 0) && within(p.x(), 0, 1));
    case Domain::Slit:
      return near(p.x(), -1) || near(p.x(), 1) || near(p.y(), -1) || near(p.y(), 1) ||
             (near(p.y(), 0) && within(p.x(), 0, 1));
  }
  return false;
}

/// Longest edge of the triangle; ties go to the lowest global edge index.
int reference_edge(const Mesh& mesh, const Triangle& tri) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    const Edge& cand = mesh.edges[static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)])];
    const Edge& cur = mesh.edges[static_cast<std::size_t>(tri.e[static_cast<std::size_t>(best)])];
    const double tol = 1e-12 * std::max(cand.length, cur.length);
    if (cand.length > cur.length + tol ||
        (std::abs(cand.length - cur.length) <= tol && tri.e[static_cast<std::size_t>(i)] < tri.e[static_cast<std::size_t>(best)]))
      best = i;
  }
  return best;
}

}  // namespace

Mesh build_initial_mesh(Domain domain) {
  switch (domain) {
    case Domain::Square: {
      std::vector<Point> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      Mesh coarse = Mesh::from_triangles(std::move(v), make_triangles({{0, 1, 2}, {0, 2, 3}}), domain, 0);
      return reset_lineage(refine_uniform(coarse));
    }
    case Domain::LShape: {
      std::vector<Point> v{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}};
      return Mesh::from_triangles(std::move(v),
                                  make_triangles({{0, 1, 4}, {0, 4, 3}, {1, 2, 4}, {2, 5, 4}, {3, 4, 6}, {4, 7, 6}}),
                                  domain, 0);
    }
    case Domain::Slit: {
      // Vertex 1 and 9 both sit at (1, 0): one per side of the slit.
      std::vector<Point> v{{0, 0},  {1, 0},   {1, 1},  {0, 1}, {-1, 1},
                           {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}};
      return Mesh::from_triangles(std::move(v),
                                  make_triangles({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 7},
                                                  {0, 7, 8}, {0, 8, 9}}),
                                  domain, 0);
    }
  }
  throw InvalidArgument("unknown domain");
}

Mesh refine(const Mesh& mesh, const std::set<int>& marked) {
  const auto nt = static_cast<std::size_t>(mesh.num_triangles());
  for (int t : marked)
    if (t < 0 || t >= mesh.num_triangles()) throw InvalidArgument("refine: marked triangle out of range");

  std::vector<int> ref(nt);
  for (std::size_t t = 0; t < nt; ++t) ref[t] = reference_edge(mesh, mesh.triangles[t]);

  std::vector<char> edge_marked(mesh.edges.size(), 0);
  for (int t : marked)
    for (int e : mesh.triangles[static_cast<std::size_t>(t)].e) edge_marked[static_cast<std::size_t>(e)] = 1;

  // Closure: a triangle with any marked edge must have its reference edge marked.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t t = 0; t < nt; ++t) {
      const Triangle& tri = mesh.triangles[t];
      const int re = tri.e[static_cast<std::size_t>(ref[t])];
      if (edge_marked[static_cast<std::size_t>(re)]) continue;
      if (edge_marked[static_cast<std::size_t>(tri.e[0])] || edge_marked[static_cast<std::size_t>(tri.e[1])] ||
          edge_marked[static_cast<std::size_t>(tri.e[2])]) {
        edge_marked[static_cast<std::size_t>(re)] = 1;
        changed = true;
      }
    }
  }

  std::vector<Point> vertices = mesh.vertices;
  std::vector<int> midpoint(mesh.edges.size(), -1);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (!edge_marked[e]) continue;
    const Edge& edge = mesh.edges[e];
    midpoint[e] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(edge.v[0])] +
                              mesh.vertices[static_cast<std::size_t>(edge.v[1])]));
  }

  std::vector<Triangle> children;
  children.reserve(nt * 2);
  auto emit = [&](int parent, RefinementTag tag, int a, int b, int c) {
    children.push_back(Triangle{{a, b, c}, {}, tag, parent});
  };
  for (std::size_t t = 0; t < nt; ++t) {
    const Triangle& tri = mesh.triangles[t];
    const int parent = static_cast<int>(t);
    std::array<int, 3> m{};
    int count = 0;
    for (int i = 0; i < 3; ++i) {
      m[static_cast<std::size_t>(i)] = midpoint[static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)])];
      count += m[static_cast<std::size_t>(i)] >= 0 ? 1 : 0;
    }
    const auto& a = tri.v;
    if (count == 0) {
      emit(parent, RefinementTag::None, a[0], a[1], a[2]);
    } else if (count == 3) {
      emit(parent, RefinementTag::Red, a[0], m[2], m[1]);
      emit(parent, RefinementTag::Red, m[2], a[1], m[0]);
      emit(parent, RefinementTag::Red, m[1], m[0], a[2]);
      emit(parent, RefinementTag::Red, m[0], m[1], m[2]);
    } else {
      // Rotate so the reference edge is opposite p0.
      const int r = ref[t];
      const int p0 = a[static_cast<std::size_t>(r)];
      const int p1 = a[static_cast<std::size_t>((r + 1) % 3)];
      const int p2 = a[static_cast<std::size_t>((r + 2) % 3)];
      const int mr = m[static_cast<std::size_t>(r)];
      const int m_opp_p1 = m[static_cast<std::size_t>((r + 1) % 3)];  // edge p2-p0
      const int m_opp_p2 = m[static_cast<std::size_t>((r + 2) % 3)];  // edge p0-p1
      if (count == 1) {
        emit(parent, RefinementTag::Green, p0, p1, mr);
        emit(parent, RefinementTag::Green, p0, mr, p2);
      } else if (m_opp_p2 >= 0) {
        emit(parent, RefinementTag::Blue, p0, mr, p2);
        emit(parent, RefinementTag::Blue, p0, m_opp_p2, mr);
        emit(parent, RefinementTag::Blue, m_opp_p2, p1, mr);
      } else {
        emit(parent, RefinementTag::Blue, p0, p1, mr);
        emit(parent, RefinementTag::Blue, p0, mr, m_opp_p1);
        emit(parent, RefinementTag::Blue, m_opp_p1, mr, p2);
      }
    }
  }
  return Mesh::from_triangles(std::move(vertices), std::move(children), mesh.domain, mesh.level + 1);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::set<int> all;
  for (int t = 0; t < mesh.num_triangles(); ++t) all.insert(all.end(), t);
  return refine(mesh, all);
}

std::string check_mesh(const Mesh& mesh) {
  std::ostringstream err;
  int incidences = 0, interior = 0, boundary = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[static_cast<std::size_t>(t)];
    if (mesh.geometry(t).signed_area() <= 0.0) {
      err << "triangle " << t << " is not counter-clockwise";
      return err.str();
    }
    for (int i = 0; i < 3; ++i) {
      const Edge& e = mesh.edges[static_cast<std::size_t>(tri.e[static_cast<std::size_t>(i)])];
      const auto key = std::minmax(tri.v[static_cast<std::size_t>((i + 1) % 3)], tri.v[static_cast<std::size_t>((i + 2) % 3)]);
      if (e.v[0] != key.first || e.v[1] != key.second) {
        err << "triangle " << t << " edge " << i << " endpoints mismatch";
        return err.str();
      }
      if (e.adj[0] != t && e.adj[1] != t) {
        err << "edge " << tri.e[static_cast<std::size_t>(i)] << " does not list triangle " << t;
        return err.str();
      }
      ++incidences;
    }
  }
  for (int k = 0; k < mesh.num_edges(); ++k) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(k)];
    const Point a = mesh.vertices[static_cast<std::size_t>(e.v[0])];
    const Point b = mesh.vertices[static_cast<std::size_t>(e.v[1])];
    if (std::abs(e.length - (b - a).norm()) > 1e-14) {
      err << "edge " << k << " length mismatch";
      return err.str();
    }
    if (e.boundary) {
      ++boundary;
      if (!on_domain_boundary(mesh.domain, a) || !on_domain_boundary(mesh.domain, b) ||
          !on_domain_boundary(mesh.domain, 0.5 * (a + b))) {
        err << "edge " << k << " has one neighbour but is not on the domain boundary (hanging node)";
        return err.str();
      }
    } else {
      ++interior;
    }
  }
  if (incidences != 2 * interior + boundary) return "edge incidence count mismatch";
  if (std::abs(mesh.total_area() - domain_area(mesh.domain)) > 1e-12 * domain_area(mesh.domain))
    return "total area differs from domain area";
  return {};
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles() << " edges " << mesh.num_edges()
     << '\n';
  char buf[96];
  for (const Point& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", p.x(), p.y());
    os << buf << '\n';
  }
  for (const Triangle& t : mesh.triangles)
    os << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.parent << ' ' << static_cast<int>(t.tag) << '\n';
  for (const Edge& e : mesh.edges)
    os << e.v[0] << ' ' << e.v[1] << ' ' << e.adj[0] << ' ' << e.adj[1] << ' ' << (e.boundary ? 1 : 0) << '\n';
}

Mesh read_mesh(std::istream& is, Domain domain) {
  std::string w1, w2, w3;
  int nv = 0, nt = 0, ne = 0;
  if (!(is >> w1 >> nv >> w2 >> nt >> w3 >> ne) || w1 != "vertices" || w2 != "triangles" || w3 != "edges")
    throw InvalidArgument("read_mesh: malformed header");
  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices)
    if (!(is >> p.x() >> p.y())) throw InvalidArgument("read_mesh: malformed vertex line");
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    int tag = 0;
    if (!(is >> t.v[0] >> t.v[1] >> t.v[2] >> t.parent >> tag)) throw InvalidArgument("read_mesh: malformed triangle line");
    t.tag = static_cast<RefinementTag>(tag);
  }
  Mesh mesh = Mesh::from_triangles(std::move(vertices), std::move(triangles), domain, 0);
  for (int k = 0; k < ne; ++k) {
    int a = 0, b = 0, t0 = 0, t1 = 0, bnd = 0;
    if (!(is >> a >> b >> t0 >> t1 >> bnd)) throw InvalidArgument("read_mesh: malformed edge line");
  }
  if (mesh.num_edges() != ne) throw InvalidArgument("read_mesh: edge count does not match triangles");
  return mesh;
}

}  // namespace awstokes
