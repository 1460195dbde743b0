#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectra/geometry.hpp"

namespace spectra {

// Zero contours of piecewise-linear vertex fields, one panel per mode, with
// the mesh boundary drawn in black.
std::string nodal_svg(const Mesh& mesh, const Eigen::MatrixXd& vertex_values,
                      const std::vector<int>& columns, const std::vector<std::string>& titles);

// Zero-level segments of one vertex field (pairs of endpoints).
std::vector<std::array<Eigen::Vector2d, 2>> zero_contour(const Mesh& mesh,
                                                         const Eigen::VectorXd& values);

}  // namespace spectra
