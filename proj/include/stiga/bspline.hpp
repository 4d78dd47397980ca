#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stiga {

/// Hard cap on the spline degree; keeps quadrature orders and local
/// work arrays bounded.
inline constexpr int kMaxDegree = 5;

/// Open knot vector on [0,1] for one parametric direction.
///
/// The first and last knots repeat exactly degree+1 times, so the first and
/// last basis functions interpolate the interval ends. Interior knots may
/// repeat up to degree+1 times; a knot of multiplicity m gives C^(p-m)
/// continuity there. Knots are stored exactly as given.
class KnotVector {
 public:
  KnotVector(int degree, std::vector<double> knots);

  /// Uniform breakpoints 0, 1/n, ..., 1 with single interior knots.
  static KnotVector uniform_open(int degree, int elements);
  /// Open vector from distinct breakpoints; `interior_multiplicity` applies
  /// to every interior breakpoint.
  static KnotVector from_breakpoints(int degree, std::span<const double> breaks,
                                     int interior_multiplicity = 1);

  int degree() const { return degree_; }
  /// Number of basis functions n.
  int count() const { return count_; }
  const std::vector<double>& knots() const { return knots_; }
  double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }

  /// Distinct knot values, ascending (the breakpoints of the mesh).
  std::vector<double> breakpoints() const;
  /// Multiplicity of the knot value nearest to `value` (exact comparison).
  int multiplicity(double value) const;
  /// Number of nonempty knot spans (= elements in this direction).
  int element_count() const;
  /// Minimal continuity order across interior knots (p-1 when all simple).
  int min_continuity() const;

  /// Index i with knot[i] <= x < knot[i+1], nonempty; x = 1 maps to the
  /// last nonempty span. Throws std::domain_error outside [0,1].
  int find_span(double x) const;

  bool operator==(const KnotVector&) const = default;

 private:
  int degree_ = 0;
  int count_ = 0;
  std::vector<double> knots_;
};

/// Values and derivatives of the degree+1 basis functions that are supported
/// on the span containing the evaluation point. d[j][i] holds the j-th
/// derivative of function first+i.
struct BasisDerivs {
  int first = 0;
  int count = 0;
  int order = 0;
  std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> d{};

  double value(int i) const { return d[0][static_cast<std::size_t>(i)]; }
  double deriv(int j, int i) const {
    return d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
};

/// Cox-de Boor evaluation of the nonzero basis functions at x.
BasisDerivs eval_basis(const KnotVector& kv, double x);

/// Values plus derivatives up to order k (k <= degree). Derivatives use the
/// knot-difference recursion with 0/0 treated as 0.
BasisDerivs eval_basis_derivatives(const KnotVector& kv, double x, int k);

/// Tensor-product B-spline/NURBS space over the parametric cylinder
/// (0,1)^(d+1). All directions share the same degree; the last direction is
/// time. Flat indices run lexicographically over the multi-index
/// (i_1, ..., i_{d+1}), last index fastest.
class TensorSpace {
 public:
  explicit TensorSpace(std::vector<KnotVector> directions);

  int dim() const { return static_cast<int>(directions_.size()); }
  int spatial_dim() const { return dim() - 1; }
  int degree() const { return directions_.front().degree(); }
  const KnotVector& direction(int a) const {
    return directions_[static_cast<std::size_t>(a)];
  }
  std::size_t size() const { return size_; }

  std::size_t flat_index(std::span<const int> multi) const;
  void unflatten(std::size_t flat, std::span<int> multi) const;

 private:
  std::vector<KnotVector> directions_;
  std::size_t size_ = 0;
};

/// Local values of all (p+1)^dim multivariate functions supported at a point,
/// with parametric gradient and (for order 2) the full parametric Hessian.
struct TensorBasisValues {
  int dim = 0;
  int count = 0;
  int order = 0;
  std::array<int, 4> first{};
  std::array<int, 4> counts{};
  std::vector<std::size_t> global;  // count entries, flat indices
  std::vector<double> value;        // count
  std::vector<double> grad;         // count * dim
  std::vector<double> hess;         // count * dim * dim (symmetric), order >= 2

  double g(int j, int a) const { return grad[static_cast<std::size_t>(j * dim + a)]; }
  double h(int j, int a, int b) const {
    return hess[static_cast<std::size_t>((j * dim + a) * dim + b)];
  }
};

/// Multivariate B-spline values/derivatives; order <= 2.
void tensor_eval(const TensorSpace& space, std::span<const double> xi, int order,
                 TensorBasisValues& out);

/// Rational (NURBS) values/derivatives by the quotient rule; order <= 2.
/// Weights must all be positive; unit weights reduce to tensor_eval.
void nurbs_eval(const TensorSpace& space, std::span<const double> weights,
                std::span<const double> xi, int order, TensorBasisValues& out);

/// Greville abscissa of basis function i (mean of its p interior knots).
double greville(const KnotVector& kv, int i);

/// Throws std::invalid_argument naming the offending knot when some interior
/// multiplicity exceeds degree - required_continuity.
void require_continuity(const TensorSpace& space, int required_continuity,
                        const std::string& context);

}  // namespace stiga
