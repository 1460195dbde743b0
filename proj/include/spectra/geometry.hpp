#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spectra {

enum class Marker { dirichlet, neumann, steklov };
enum class Weight { unit, genus2 };
enum class Orientation { outer_ccw, inner_cw };

std::string_view to_string(Marker m);
std::string_view to_string(Weight w);
Marker parse_marker(std::string_view s);
Weight parse_weight(std::string_view s);

struct Circle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  Orientation orientation = Orientation::outer_ccw;
};

// A planar domain: either a simple counterclockwise polygon whose edge i runs
// from vertex i to vertex i+1 (mod n), or a region bounded by circles.
struct Domain {
  enum class Kind { polygon, curves };

  Kind kind = Kind::polygon;
  std::string name;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Marker> edge_markers;
  std::vector<Circle> circles;
  Weight weight = Weight::unit;

  bool is_polygon() const { return kind == Kind::polygon; }
  double area() const;
  double perimeter() const;
  bool contains(const Eigen::Vector2d& p) const;
  double distance_to_boundary(const Eigen::Vector2d& p) const;
};

Domain make_polygon(std::vector<Eigen::Vector2d> vertices,
                    std::vector<Marker> markers, std::string name = "polygon");
Domain make_annulus(double eps, double inner_radius = 0.1);
Domain make_disk(double radius = 1.0);
Domain scaled(const Domain& d, double factor);
// Copy of a polygon with every edge marker replaced.
Domain with_uniform_marker(const Domain& d, Marker m);

// Throws InputError when an invariant of Domain is violated.
void validate(const Domain& d);

// Resolves a built-in name (gww-a, gww-b, unit-square, unit-disk,
// annulus:eps=<v>, dn-square, dn-triangle) or reads a domain file.
Domain load_domain(const std::string& path_or_name);
Domain parse_domain(std::istream& in, const std::string& name);
bool is_builtin_domain(std::string_view name);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  Marker marker = Marker::dirichlet;
};

struct Mesh {
  Eigen::Matrix2Xd vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;
  int level = 0;

  int num_vertices() const { return static_cast<int>(vertices.cols()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double signed_area(int t) const;
  double area() const;
  Eigen::Vector2d vertex(int i) const { return vertices.col(i); }
};

// Unique undirected edges of a mesh with the triangle-to-edge incidence.
// Local edge k of triangle t is opposite local vertex k.
struct EdgeTable {
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangle_edges;
  // Marker of each edge; only meaningful where on_boundary is set.
  std::vector<Marker> marker;
  std::vector<bool> on_boundary;
};

EdgeTable build_edge_table(const Mesh& mesh);
double max_edge_length(const Mesh& mesh);

// Coarse ear-clipping triangulation of a polygonal domain.
Mesh triangulate(const Domain& domain);
// Red refinement: every triangle is split into four via edge midpoints.
Mesh refine(const Mesh& mesh);
Mesh triangulate(const Domain& domain, int levels);

struct CurveNodes {
  Eigen::Matrix2Xd points;
  Eigen::Matrix2Xd normals;  // outward from the domain
  Eigen::VectorXd curvature;
  Eigen::VectorXd weights;   // arclength weights
  Eigen::VectorXd parameter;
  double speed = 1.0;        // |x'(t)|, constant for circles
  double radius = 1.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Orientation orientation = Orientation::outer_ccw;

  int size() const { return static_cast<int>(points.cols()); }
};

struct BoundaryQuadrature {
  std::vector<CurveNodes> curves;

  int size() const;
  // Offset of curve c within the concatenated node numbering.
  int offset(int c) const;
  double total_length() const;
  Eigen::Matrix2Xd all_points() const;
  Eigen::VectorXd all_weights() const;
};

BoundaryQuadrature boundary_quadrature(const Domain& domain, int n_per_curve,
                                       double phase = 0.0);
BoundaryQuadrature boundary_quadrature(const Domain& domain,
                                       const std::vector<int>& n_per_curve,
                                       double phase = 0.0);
// Splits a total node count across curves in proportion to circumference,
// each share rounded to an even number (at least 8).
std::vector<int> split_by_circumference(const Domain& domain, int total);

}  // namespace spectra
