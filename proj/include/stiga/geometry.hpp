#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

#include "stiga/bspline.hpp"

namespace stiga {

/// One parametric knot-span product and its size metrics. h_phys is the
/// physical size h_K = ||grad Phi||_(L^inf(K)) * diam(K^), with the sup
/// approximated over the element's quadrature points.
struct Element {
  std::array<int, 4> spans{};
  std::array<double, 4> lo{};
  std::array<double, 4> hi{};
  double diam_param = 0.0;
  double volume_param = 0.0;
  double h_phys = 0.0;
};

struct Mesh {
  std::vector<Element> elements;
  double h = 0.0;                 // max_K h_K
  double uniformity_ratio = 1.0;  // h / min_K h_K, an empirical C_u
};

/// Geometry evaluation data at one parametric point.
struct GeomEval {
  Eigen::VectorXd x;     // Phi(xi)
  Eigen::MatrixXd jac;   // J(a,b) = d Phi_a / d xi_b
  Eigen::MatrixXd inv;   // J^{-1}
  double det = 0.0;
  // Second derivatives per physical component: hess[c](a,b) = d2 Phi_c / d xi_a d xi_b.
  std::vector<Eigen::MatrixXd> hess;
};

/// NURBS geometry map Phi from the parametric cylinder (0,1)^(d+1) to the
/// physical cylinder Q. Single patch; the last coordinate is time.
/// Immutable after construction.
class GeometryMap {
 public:
  GeometryMap(TensorSpace space, std::vector<double> weights, std::vector<double> points);

  /// Axis-aligned box (0,L_1) x ... x (0,T): unit weights, control points on
  /// the scaled Greville grid, which reproduces the affine map exactly.
  static GeometryMap box(TensorSpace space, std::span<const double> extents);

  int dim() const { return space_.dim(); }
  int spatial_dim() const { return space_.spatial_dim(); }
  const TensorSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  std::span<const double> control_point(std::size_t flat) const {
    return {points_.data() + flat * static_cast<std::size_t>(dim()),
            static_cast<std::size_t>(dim())};
  }

  Eigen::VectorXd map_point(std::span<const double> xi) const;

  /// Jacobian (and Hessians for order 2). Throws on |det| < 1e-14.
  GeomEval eval(std::span<const double> xi, int order) const;

 private:
  TensorSpace space_;
  std::vector<double> weights_;
  std::vector<double> points_;  // |I| * dim, component-major per point
};

/// Enumerates all nonempty knot-span products, computes per-element and
/// global mesh sizes, and asserts det(grad Phi) > 0 at every quadrature
/// point (`q` points per direction).
Mesh build_mesh(const GeometryMap& geometry, int q);

}  // namespace stiga
