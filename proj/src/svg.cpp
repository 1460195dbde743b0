#include "spectra/svg.hpp"

#include <cmath>
#include <sstream>

#include "spectra/error.hpp"

namespace spectra {

std::vector<std::array<Eigen::Vector2d, 2>> zero_contour(const Mesh& mesh,
                                                         const Eigen::VectorXd& values) {
  if (values.size() != mesh.num_vertices()) throw InputError("one value per mesh vertex is required");
  const double tiny = 1e-12 * std::max(1e-300, values.cwiseAbs().maxCoeff());
  std::vector<std::array<Eigen::Vector2d, 2>> out;
  for (const auto& tri : mesh.triangles) {
    std::vector<Eigen::Vector2d> cut;
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      double fa = values[a], fb = values[b];
      if (std::abs(fa) < tiny) fa = tiny;
      if (std::abs(fb) < tiny) fb = tiny;
      if ((fa > 0) == (fb > 0)) continue;
      const double t = fa / (fa - fb);
      cut.push_back(mesh.vertex(a) + t * (mesh.vertex(b) - mesh.vertex(a)));
    }
    if (cut.size() == 2) out.push_back({cut[0], cut[1]});
  }
  return out;
}

std::string nodal_svg(const Mesh& mesh, const Eigen::MatrixXd& vertex_values,
                      const std::vector<int>& columns, const std::vector<std::string>& titles) {
  const double panel = 320.0, pad = 20.0;
  const Eigen::Vector2d lo = mesh.vertices.rowwise().minCoeff();
  const Eigen::Vector2d hi = mesh.vertices.rowwise().maxCoeff();
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const double s = (panel - 2 * pad) / span;

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel * columns.size()
     << "\" height=\"" << panel + 20 << "\">\n";
  for (std::size_t p = 0; p < columns.size(); ++p) {
    const int c = columns[p];
    if (c < 0 || c >= vertex_values.cols()) throw InputError("mode index out of range for plotting");
    const double ox = p * panel;
    auto X = [&](const Eigen::Vector2d& v) { return ox + pad + s * (v.x() - lo.x()); };
    auto Y = [&](const Eigen::Vector2d& v) { return pad + 20 + s * (hi.y() - v.y()); };
    os << "<g>\n";
    if (p < titles.size())
      os << "<text x=\"" << ox + pad << "\" y=\"16\" font-size=\"12\">" << titles[p] << "</text>\n";
    for (const auto& e : mesh.boundary_edges) {
      const Eigen::Vector2d a = mesh.vertex(e.a), b = mesh.vertex(e.b);
      os << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b)
         << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& seg : zero_contour(mesh, vertex_values.col(c)))
      os << "<line x1=\"" << X(seg[0]) << "\" y1=\"" << Y(seg[0]) << "\" x2=\"" << X(seg[1])
         << "\" y2=\"" << Y(seg[1]) << "\" stroke=\"crimson\" stroke-width=\"1\"/>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spectra
