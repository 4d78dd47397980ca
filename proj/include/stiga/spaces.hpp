#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "stiga/bspline.hpp"
#include "stiga/geometry.hpp"

namespace stiga {

/// Scalar function of the physical space-time point (x_1..x_d, t).
using SourceFn = std::function<double(std::span<const double>)>;

enum class BoundaryConstraint {
  none,       // all DOFs free (flux spaces)
  parabolic,  // zero trace on the lateral boundary Sigma and the initial face Sigma_0
};

/// lambda = 1 and mu = delta_{s,h} = theta * h give the discrete scheme; the
/// majorants accept general positive lambda, mu.
struct StabilizationParams {
  double lambda = 1.0;
  double theta = 1.0;
  double delta = 0.0;
  double mu = 0.0;

  static StabilizationParams for_mesh(double theta, double h);
};

/// Weights (nu_1..nu_4) of the general error norm
///   nu_1 ||grad_x v||^2_Q + nu_2 ||dt v||^2_Q
///   + nu_3 ||grad_x v||^2_{Sigma_T} + nu_4 ||v||^2_{Sigma_T}.
struct NormWeights {
  double grad_q = 0.0;
  double dt_q = 0.0;
  double grad_sigma_t = 0.0;
  double sigma_t = 0.0;
};

/// The |||.|||_{s,h} preset: (1, delta, delta, 1).
NormWeights sh_norm_weights(const StabilizationParams& params);

/// Tensor B-spline/NURBS space over a geometry, with the boundary-constrained
/// DOFs eliminated. For open knot vectors the constrained set is exactly the
/// multi-indices touching Sigma or Sigma_0. Immutable after construction.
class DiscreteSpace {
 public:
  DiscreteSpace(std::shared_ptr<const GeometryMap> geometry, TensorSpace basis,
                BoundaryConstraint bc, int quad_points = 0,
                std::vector<double> basis_weights = {});

  const GeometryMap& geometry() const { return *geometry_; }
  std::shared_ptr<const GeometryMap> geometry_ptr() const { return geometry_; }
  const TensorSpace& basis() const { return basis_; }
  const std::vector<double>& basis_weights() const { return basis_weights_; }
  BoundaryConstraint constraint() const { return bc_; }
  const Mesh& mesh() const { return mesh_; }
  double h() const { return mesh_.h; }
  int dim() const { return basis_.dim(); }
  int spatial_dim() const { return basis_.spatial_dim(); }
  int degree() const { return basis_.degree(); }
  int quad_points() const { return quad_points_; }

  std::size_t total_count() const { return basis_.size(); }
  std::size_t free_count() const { return flat_of_free_.size(); }
  bool is_free(std::size_t flat) const { return free_of_flat_[flat] >= 0; }
  std::ptrdiff_t free_index(std::size_t flat) const { return free_of_flat_[flat]; }
  std::size_t flat_of_free(std::size_t free) const { return flat_of_free_[free]; }

 private:
  std::shared_ptr<const GeometryMap> geometry_;
  TensorSpace basis_;
  std::vector<double> basis_weights_;
  BoundaryConstraint bc_;
  int quad_points_;
  Mesh mesh_;
  std::vector<std::ptrdiff_t> free_of_flat_;
  std::vector<std::size_t> flat_of_free_;
};

/// Coefficients over the free DOFs of a space; constrained DOFs are
/// implicitly zero.
struct DiscreteField {
  std::shared_ptr<const DiscreteSpace> space;
  Eigen::VectorXd coeffs;
};

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

/// Stabilized space-time system K_h u = f_h over the free DOFs:
///   a_{s,h}(u, w) = (dt u, w)_Q + delta (dt u, dt w)_Q
///                 + (grad_x u, grad_x w)_Q + delta (grad_x u, dt grad_x w)_Q,
///   f_h[i] = (f, phi_i + delta dt phi_i)_Q.
/// Requires a basis that is at least C^1 in every direction.
SparseSystem assemble_system(const DiscreteSpace& space, const StabilizationParams& params,
                             const SourceFn& f);

/// Symmetric Gram matrix G with w' G w = the weighted norm of w_h.
/// Throws std::domain_error for negative weights.
Eigen::SparseMatrix<double> assemble_norm_gram(const DiscreteSpace& space,
                                               const NormWeights& nu);

/// Physical-space derivatives of a discrete field at a parametric point.
struct FieldDerivs {
  double value = 0.0;
  double dt = 0.0;
  double lap_x = 0.0;          // order 2
  Eigen::VectorXd grad_x;      // d spatial components
  Eigen::VectorXd dt_grad_x;   // order 2, d components
};

/// order 1: value, dt, grad_x; order 2 adds lap_x and dt_grad_x via the
/// chain rule with Hessian corrections for non-affine maps.
FieldDerivs eval_field(const DiscreteField& field, std::span<const double> xi, int order);

/// L2(Q)-orthogonal projection of g onto the space (mass-matrix solve over
/// the free DOFs).
DiscreteField l2_project(std::shared_ptr<const DiscreteSpace> space, const SourceFn& g);

/// Surface measure factor of the face {xi_axis = const} at a geometry
/// evaluation: sqrt(det(T' T)) over the tangent columns of the Jacobian.
double face_measure(const GeomEval& geo, int axis);

}  // namespace stiga
