#include "spectra/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "spectra/error.hpp"

namespace spectra {

namespace {

using Vec2 = Eigen::Vector2d;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

double signed_polygon_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

// Closed-triangle membership for the ear test.
bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

double min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto angle = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p;
    const Vec2 v = r - p;
    return std::atan2(std::abs(cross(u, v)), u.dot(v));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

std::string trim(std::string s) {
  const auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Domain gww_a() {
  return make_polygon({{0, 0}, {1, 0}, {1.5, 0.5}, {2, 0}, {2, 1}, {1.5, 1.5}, {0.5, 0.5}, {0, 1}},
                      {}, "gww-a");
}

Domain gww_b() {
  return make_polygon({{0, 0}, {0.5, -0.5}, {1, 0}, {0.5, 0.5}, {1, 1}, {1, 2}, {0.5, 1.5}, {0, 2}},
                      {}, "gww-b");
}

}  // namespace

std::string_view to_string(Marker m) {
  switch (m) {
    case Marker::dirichlet: return "dirichlet";
    case Marker::neumann: return "neumann";
    case Marker::steklov: return "steklov";
  }
  return "?";
}

std::string_view to_string(Weight w) { return w == Weight::unit ? "unit" : "genus2"; }

Marker parse_marker(std::string_view s) {
  if (s == "dirichlet" || s == "D") return Marker::dirichlet;
  if (s == "neumann" || s == "N") return Marker::neumann;
  if (s == "steklov" || s == "S") return Marker::steklov;
  throw InputError("unknown edge marker '" + std::string(s) + "'");
}

Weight parse_weight(std::string_view s) {
  if (s == "unit") return Weight::unit;
  if (s == "genus2") return Weight::genus2;
  throw InputError("unknown weight '" + std::string(s) + "' (expected unit|genus2)");
}

double Domain::area() const {
  if (is_polygon()) return signed_polygon_area(vertices);
  double a = 0.0;
  for (const auto& c : circles) {
    const double disk = std::numbers::pi * c.radius * c.radius;
    a += c.orientation == Orientation::outer_ccw ? disk : -disk;
  }
  return a;
}

double Domain::perimeter() const {
  double p = 0.0;
  if (is_polygon()) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      p += (vertices[(i + 1) % vertices.size()] - vertices[i]).norm();
  } else {
    for (const auto& c : circles) p += 2.0 * std::numbers::pi * c.radius;
  }
  return p;
}

bool Domain::contains(const Vec2& p) const {
  if (is_polygon()) {
    // even-odd crossing rule
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = vertices[i];
      const Vec2& b = vertices[j];
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double x = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
        if (p.x() < x) inside = !inside;
      }
    }
    return inside;
  }
  for (const auto& c : circles) {
    const double r = (p - c.center).norm();
    if (c.orientation == Orientation::outer_ccw ? r >= c.radius : r <= c.radius) return false;
  }
  return true;
}

double Domain::distance_to_boundary(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  if (is_polygon()) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      d = std::min(d, point_segment_distance(p, vertices[i], vertices[(i + 1) % vertices.size()]));
  } else {
    for (const auto& c : circles) d = std::min(d, std::abs((p - c.center).norm() - c.radius));
  }
  return d;
}

Domain make_polygon(std::vector<Vec2> vertices, std::vector<Marker> markers, std::string name) {
  Domain d;
  d.kind = Domain::Kind::polygon;
  d.name = std::move(name);
  if (markers.empty()) markers.assign(vertices.size(), Marker::dirichlet);
  d.vertices = std::move(vertices);
  d.edge_markers = std::move(markers);
  validate(d);
  return d;
}

Domain make_annulus(double eps, double inner_radius) {
  Domain d;
  d.kind = Domain::Kind::curves;
  std::ostringstream name;
  name << "annulus:eps=" << eps;
  d.name = name.str();
  d.circles.push_back({Vec2(0.0, 0.0), 1.0, Orientation::outer_ccw});
  d.circles.push_back({Vec2(0.0, eps), inner_radius, Orientation::inner_cw});
  validate(d);
  return d;
}

Domain make_disk(double radius) {
  Domain d;
  d.kind = Domain::Kind::curves;
  d.name = "unit-disk";
  d.circles.push_back({Vec2(0.0, 0.0), radius, Orientation::outer_ccw});
  validate(d);
  return d;
}

Domain scaled(const Domain& d, double factor) {
  if (!(factor > 0.0)) throw InputError("scale factor must be positive");
  Domain s = d;
  for (auto& v : s.vertices) v *= factor;
  for (auto& c : s.circles) {
    c.center *= factor;
    c.radius *= factor;
  }
  s.name = d.name + "*" + std::to_string(factor);
  return s;
}

Domain with_uniform_marker(const Domain& d, Marker m) {
  Domain s = d;
  std::fill(s.edge_markers.begin(), s.edge_markers.end(), m);
  return s;
}

void validate(const Domain& d) {
  if (d.is_polygon()) {
    const auto& v = d.vertices;
    const std::size_t n = v.size();
    if (n < 3) throw InputError("polygon needs at least 3 vertices");
    if (d.edge_markers.size() != n)
      throw InputError("polygon has " + std::to_string(n) + " edges but " +
                       std::to_string(d.edge_markers.size()) + " markers");
    for (const auto& p : v)
      if (!p.allFinite()) throw InputError("polygon vertex is not finite");
    if (signed_polygon_area(v) <= 0.0)
      throw InputError("polygon vertices must be counterclockwise (signed area <= 0)");
    for (std::size_t i = 0; i < n; ++i) {
      if ((v[(i + 1) % n] - v[i]).norm() == 0.0)
        throw InputError("polygon has a zero-length edge at vertex " + std::to_string(i));
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        const Vec2 &a = v[i], &b = v[(i + 1) % n], &c = v[j], &e = v[(j + 1) % n];
        if (adjacent) {
          // adjacent edges may only share their common vertex
          const Vec2& shared = (j == i + 1) ? b : a;
          const Vec2& far1 = (j == i + 1) ? a : b;
          const Vec2& far2 = (j == i + 1) ? e : c;
          if (orient(far1, shared, far2) == 0.0 && (far1 - shared).dot(far2 - shared) > 0.0)
            throw InputError("polygon edges " + std::to_string(i) + " and " + std::to_string(j) +
                             " overlap");
          continue;
        }
        if (segments_intersect(a, b, c, e))
          throw InputError("polygon is self-intersecting (edges " + std::to_string(i) + " and " +
                           std::to_string(j) + ")");
      }
    }
    return;
  }

  if (d.circles.empty()) throw InputError("curve domain has no circles");
  int outer = -1;
  for (std::size_t i = 0; i < d.circles.size(); ++i) {
    const auto& c = d.circles[i];
    if (!(c.radius > 0.0) || !c.center.allFinite()) throw InputError("circle radius must be > 0");
    if (c.orientation == Orientation::outer_ccw) {
      if (outer >= 0) throw InputError("curve domain has more than one outer circle");
      outer = static_cast<int>(i);
    }
  }
  if (outer < 0) throw InputError("curve domain needs one outer (ccw) circle");
  const auto& o = d.circles[outer];
  for (std::size_t i = 0; i < d.circles.size(); ++i) {
    if (static_cast<int>(i) == outer) continue;
    const auto& c = d.circles[i];
    if ((c.center - o.center).norm() + c.radius >= o.radius)
      throw InputError("inner circle " + std::to_string(i) + " is not strictly inside the outer one");
    for (std::size_t j = i + 1; j < d.circles.size(); ++j) {
      if (static_cast<int>(j) == outer) continue;
      const auto& e = d.circles[j];
      if ((c.center - e.center).norm() <= c.radius + e.radius)
        throw InputError("inner circles " + std::to_string(i) + " and " + std::to_string(j) +
                         " overlap");
    }
  }
}

bool is_builtin_domain(std::string_view name) {
  return name == "gww-a" || name == "gww-b" || name == "unit-square" || name == "unit-disk" ||
         name == "dn-square" || name == "dn-triangle" || name.starts_with("annulus:eps=");
}

Domain load_domain(const std::string& path_or_name) {
  const std::string& s = path_or_name;
  if (s == "gww-a") return gww_a();
  if (s == "gww-b") return gww_b();
  if (s == "unit-square") return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}, s);
  if (s == "unit-disk") return make_disk(1.0);
  if (s == "dn-square") {
    using enum Marker;
    return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {dirichlet, dirichlet, neumann, dirichlet},
                        s);
  }
  if (s == "dn-triangle") {
    using enum Marker;
    const double r2 = std::sqrt(2.0);
    return make_polygon({{0, 0}, {r2, 0}, {0, r2}}, {neumann, dirichlet, dirichlet}, s);
  }
  if (s.starts_with("annulus:eps=")) {
    const std::string value = s.substr(std::string("annulus:eps=").size());
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty())
      throw InputError("cannot parse eccentricity in '" + s + "'");
    Domain d = make_annulus(eps);
    d.name = s;
    return d;
  }
  std::ifstream in(s);
  if (!in) throw InputError("domain '" + s + "' is neither a built-in name nor a readable file");
  return parse_domain(in, s);
}

Domain parse_domain(std::istream& in, const std::string& name) {
  Domain d;
  d.name = name;
  enum class Section { none, polygon, circles } section = Section::none;
  std::map<int, std::pair<int, Marker>> edges;
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw InputError(name + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "polygon") {
      section = Section::polygon;
      d.kind = Domain::Kind::polygon;
    } else if (key == "circles") {
      section = Section::circles;
      d.kind = Domain::Kind::curves;
    } else if (key == "weight") {
      std::string w;
      if (!(ls >> w)) fail("weight needs a value");
      d.weight = parse_weight(w);
    } else if (key == "name") {
      std::string n;
      if (ls >> n) d.name = n;
    } else if (key == "v") {
      if (section != Section::polygon) fail("'v' outside polygon section");
      double x = 0, y = 0;
      if (!(ls >> x >> y)) fail("expected 'v x y'");
      d.vertices.emplace_back(x, y);
    } else if (key == "e") {
      if (section != Section::polygon) fail("'e' outside polygon section");
      int i = 0, j = 0;
      std::string m;
      if (!(ls >> i >> j >> m)) fail("expected 'e i j marker'");
      if (j < 0 || i < 0) fail("negative vertex index");
      try {
        edges[i] = {j, parse_marker(m)};
      } catch (const InputError& e) {
        fail(e.what());
      }
    } else if (key == "c") {
      if (section != Section::circles) fail("'c' outside circles section");
      double cx = 0, cy = 0, r = 0;
      std::string o;
      if (!(ls >> cx >> cy >> r >> o)) fail("expected 'c cx cy r orientation'");
      Orientation orient;
      if (o == "outer-ccw") orient = Orientation::outer_ccw;
      else if (o == "inner-cw") orient = Orientation::inner_cw;
      else fail("orientation must be outer-ccw or inner-cw");
      d.circles.push_back({Vec2(cx, cy), r, orient});
    } else {
      fail("unknown directive '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (section == Section::none) throw InputError(name + ": no 'polygon' or 'circles' section");
  if (d.is_polygon()) {
    const int n = static_cast<int>(d.vertices.size());
    d.edge_markers.assign(n, Marker::dirichlet);
    for (const auto& [i, edge] : edges) {
      const auto [j, m] = edge;
      if (i >= n || j != (i + 1) % n)
        throw InputError(name + ": edge 'e " + std::to_string(i) + " " + std::to_string(j) +
                         "' does not follow the vertex cycle");
      d.edge_markers[i] = m;
    }
  }
  validate(d);
  return d;
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * orient(vertices.col(tri[0]), vertices.col(tri[1]), vertices.col(tri[2]));
}

double Mesh::area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += signed_area(t);
  return a;
}

double max_edge_length(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (mesh.vertices.col(t[k]) - mesh.vertices.col(t[(k + 1) % 3])).norm());
  return h;
}

EdgeTable build_edge_table(const Mesh& mesh) {
  EdgeTable table;
  std::map<std::pair<int, int>, int> index;
  table.triangle_edges.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second},
                                              static_cast<int>(table.edges.size()));
      if (inserted) table.edges.push_back({key.first, key.second});
      table.triangle_edges[t][k] = it->second;
    }
  }
  table.marker.assign(table.edges.size(), Marker::dirichlet);
  table.on_boundary.assign(table.edges.size(), false);
  for (const auto& be : mesh.boundary_edges) {
    const auto key = std::minmax(be.a, be.b);
    const int e = index.at({key.first, key.second});
    table.on_boundary[e] = true;
    table.marker[e] = be.marker;
  }
  return table;
}

Mesh triangulate(const Domain& domain) {
  if (!domain.is_polygon()) throw InputError("triangulate needs a polygonal domain");
  const auto& v = domain.vertices;
  const int n = static_cast<int>(v.size());

  Mesh mesh;
  mesh.vertices.resize(2, n);
  for (int i = 0; i < n; ++i) mesh.vertices.col(i) = v[i];
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({i, (i + 1) % n, domain.edge_markers[i]});

  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;
  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    int best = -1;
    double best_quality = -1.0;
    for (int k = 0; k < m; ++k) {
      const int ia = ring[(k + m - 1) % m], ib = ring[k], ic = ring[(k + 1) % m];
      const Vec2 &a = v[ia], &b = v[ib], &c = v[ic];
      if (orient(a, b, c) <= 0.0) continue;  // reflex or zero-area ear
      bool empty = true;
      for (int q : ring) {
        if (q == ia || q == ib || q == ic) continue;
        if (in_triangle(v[q], a, b, c)) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      const double quality = min_angle(a, b, c);
      if (quality > best_quality + 1e-12) {
        best_quality = quality;
        best = k;
      }
    }
    if (best < 0) throw InputError("degenerate polygon: no valid ear (collinear vertices?)");
    mesh.triangles.push_back({ring[(best + m - 1) % m], ring[best], ring[(best + 1) % m]});
    ring.erase(ring.begin() + best);
  }
  if (orient(v[ring[0]], v[ring[1]], v[ring[2]]) <= 0.0)
    throw InputError("degenerate polygon: final ear has zero area");
  mesh.triangles.push_back({ring[0], ring[1], ring[2]});
  mesh.h = max_edge_length(mesh);
  return mesh;
}

Mesh refine(const Mesh& mesh) {
  Mesh fine;
  const int nv = mesh.num_vertices();
  std::map<std::pair<int, int>, int> midpoint;
  std::vector<Vec2> added;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, nv + static_cast<int>(added.size()));
    if (inserted) added.push_back(0.5 * (mesh.vertices.col(a) + mesh.vertices.col(b)));
    return it->second;
  };
  fine.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    fine.triangles.push_back({a, ab, ca});
    fine.triangles.push_back({ab, b, bc});
    fine.triangles.push_back({ca, bc, c});
    fine.triangles.push_back({ab, bc, ca});
  }
  fine.vertices.resize(2, nv + static_cast<int>(added.size()));
  fine.vertices.leftCols(nv) = mesh.vertices;
  for (std::size_t i = 0; i < added.size(); ++i) fine.vertices.col(nv + static_cast<int>(i)) = added[i];
  for (const auto& e : mesh.boundary_edges) {
    const int m = mid(e.a, e.b);
    fine.boundary_edges.push_back({e.a, m, e.marker});
    fine.boundary_edges.push_back({m, e.b, e.marker});
  }
  fine.h = max_edge_length(fine);
  fine.level = mesh.level + 1;
  return fine;
}

Mesh triangulate(const Domain& domain, int levels) {
  Mesh m = triangulate(domain);
  for (int i = 0; i < levels; ++i) m = refine(m);
  return m;
}

int BoundaryQuadrature::size() const {
  int n = 0;
  for (const auto& c : curves) n += c.size();
  return n;
}

int BoundaryQuadrature::offset(int c) const {
  int n = 0;
  for (int i = 0; i < c; ++i) n += curves[i].size();
  return n;
}

double BoundaryQuadrature::total_length() const { return all_weights().sum(); }

Eigen::Matrix2Xd BoundaryQuadrature::all_points() const {
  Eigen::Matrix2Xd p(2, size());
  int o = 0;
  for (const auto& c : curves) {
    p.middleCols(o, c.size()) = c.points;
    o += c.size();
  }
  return p;
}

Eigen::VectorXd BoundaryQuadrature::all_weights() const {
  Eigen::VectorXd w(size());
  int o = 0;
  for (const auto& c : curves) {
    w.segment(o, c.size()) = c.weights;
    o += c.size();
  }
  return w;
}

BoundaryQuadrature boundary_quadrature(const Domain& domain, int n_per_curve, double phase) {
  return boundary_quadrature(domain, std::vector<int>(domain.circles.size(), n_per_curve), phase);
}

BoundaryQuadrature boundary_quadrature(const Domain& domain, const std::vector<int>& n_per_curve,
                                       double phase) {
  if (domain.is_polygon()) throw InputError("boundary quadrature needs a curve domain");
  if (n_per_curve.size() != domain.circles.size())
    throw InputError("one node count per boundary curve is required");
  BoundaryQuadrature q;
  for (std::size_t ci = 0; ci < domain.circles.size(); ++ci) {
    const auto& circ = domain.circles[ci];
    const int n = n_per_curve[ci];
    if (n < 4 || n % 2 != 0)
      throw InputError("node count per curve must be even and >= 4 (got " + std::to_string(n) + ")");
    CurveNodes c;
    c.radius = circ.radius;
    c.center = circ.center;
    c.orientation = circ.orientation;
    c.speed = circ.radius;
    c.points.resize(2, n);
    c.normals.resize(2, n);
    c.curvature = Eigen::VectorXd::Constant(n, 1.0 / circ.radius);
    c.weights = Eigen::VectorXd::Constant(n, 2.0 * std::numbers::pi * circ.radius / n);
    c.parameter.resize(n);
    const bool outer = circ.orientation == Orientation::outer_ccw;
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * std::numbers::pi * j / n + phase;
      c.parameter[j] = t;
      const Vec2 radial(std::cos(t), outer ? std::sin(t) : -std::sin(t));
      c.points.col(j) = circ.center + circ.radius * radial;
      c.normals.col(j) = outer ? radial : Vec2(-radial);
    }
    q.curves.push_back(std::move(c));
  }
  return q;
}

std::vector<int> split_by_circumference(const Domain& domain, int total) {
  double length = 0.0;
  for (const auto& c : domain.circles) length += c.radius;
  std::vector<int> out;
  int used = 0;
  for (std::size_t i = 0; i < domain.circles.size(); ++i) {
    int n;
    if (i + 1 == domain.circles.size()) {
      n = total - used;
    } else {
      n = static_cast<int>(std::lround(total * domain.circles[i].radius / length / 2.0)) * 2;
    }
    n = std::max(8, n + (n % 2));
    out.push_back(n);
    used += n;
  }
  return out;
}

}  // namespace spectra
