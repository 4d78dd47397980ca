#include "stiga/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stiga {

namespace {

// Nonzero basis functions of the given degree on span `span`, stable
// left/right form of the Cox-de Boor recursion. out[r] = B_{span-degree+r}.
void basis_funs(const std::vector<double>& knots, int span, double x, int degree,
                std::span<double> out) {
  std::array<double, kMaxDegree + 1> left{};
  std::array<double, kMaxDegree + 1> right{};
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[static_cast<std::size_t>(j)] = x - knots[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] = knots[static_cast<std::size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double den = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = out[static_cast<std::size_t>(r)] / den;
      out[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[static_cast<std::size_t>(j)] = saved;
  }
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1 || degree_ > kMaxDegree) {
    throw std::invalid_argument("knot vector: degree must be in [1, " +
                                std::to_string(kMaxDegree) + "], got " +
                                std::to_string(degree_));
  }
  const int m = static_cast<int>(knots_.size());
  count_ = m - degree_ - 1;
  if (count_ < degree_ + 1) {
    throw std::invalid_argument("knot vector: too few knots for degree " +
                                std::to_string(degree_));
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw std::invalid_argument("knot vector: knots must be non-decreasing");
  }
  if (knots_.front() != 0.0 || knots_.back() != 1.0) {
    throw std::invalid_argument("knot vector: must start at 0 and end at 1");
  }
  // Open: end knots repeat exactly degree+1 times.
  if (knots_[static_cast<std::size_t>(degree_)] != 0.0 ||
      knots_[static_cast<std::size_t>(degree_ + 1)] <= 0.0) {
    throw std::invalid_argument("knot vector: first knot must have multiplicity degree+1");
  }
  if (knots_[static_cast<std::size_t>(count_)] != 1.0 ||
      knots_[static_cast<std::size_t>(count_ - 1)] >= 1.0) {
    throw std::invalid_argument("knot vector: last knot must have multiplicity degree+1");
  }
  // Interior multiplicities bounded by degree+1 (follows from the open ends,
  // but catches pathological inputs explicitly).
  int run = 1;
  for (int i = degree_ + 1; i < count_; ++i) {
    run = (knots_[static_cast<std::size_t>(i)] == knots_[static_cast<std::size_t>(i - 1)]) ? run + 1 : 1;
    if (run > degree_ + 1) {
      throw std::invalid_argument("knot vector: interior multiplicity exceeds degree+1");
    }
  }
}

KnotVector KnotVector::uniform_open(int degree, int elements) {
  if (elements < 1) throw std::invalid_argument("knot vector: need at least one element");
  std::vector<double> breaks(static_cast<std::size_t>(elements) + 1);
  for (int i = 0; i <= elements; ++i) {
    breaks[static_cast<std::size_t>(i)] = static_cast<double>(i) / elements;
  }
  return from_breakpoints(degree, breaks);
}

KnotVector KnotVector::from_breakpoints(int degree, std::span<const double> breaks,
                                        int interior_multiplicity) {
  if (breaks.size() < 2) throw std::invalid_argument("knot vector: need at least two breakpoints");
  if (interior_multiplicity < 1 || interior_multiplicity > degree + 1) {
    throw std::invalid_argument("knot vector: interior multiplicity out of range");
  }
  std::vector<double> knots;
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), breaks.front());
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    knots.insert(knots.end(), static_cast<std::size_t>(interior_multiplicity), breaks[i]);
  }
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), breaks.back());
  return KnotVector(degree, std::move(knots));
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double k : knots_) {
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

int KnotVector::multiplicity(double value) const {
  return static_cast<int>(std::count(knots_.begin(), knots_.end(), value));
}

int KnotVector::element_count() const {
  int n = 0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i] > knots_[i - 1]) ++n;
  }
  return n;
}

int KnotVector::min_continuity() const {
  int c = degree_ - 1;
  const auto breaks = breakpoints();
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    c = std::min(c, degree_ - multiplicity(breaks[i]));
  }
  return c;
}

int KnotVector::find_span(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("find_span: point " + std::to_string(x) + " outside [0,1]");
  }
  const int n = count_;
  if (x >= knots_[static_cast<std::size_t>(n)]) {
    // Right endpoint: last nonempty span.
    int s = n - 1;
    while (knots_[static_cast<std::size_t>(s + 1)] <= knots_[static_cast<std::size_t>(s)]) --s;
    return s;
  }
  int lo = degree_;
  int hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x < knots_[static_cast<std::size_t>(mid)]) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

BasisDerivs eval_basis(const KnotVector& kv, double x) {
  return eval_basis_derivatives(kv, x, 0);
}

BasisDerivs eval_basis_derivatives(const KnotVector& kv, double x, int k) {
  if (k < 0 || k > kv.degree()) {
    throw std::invalid_argument("eval_basis_derivatives: order " + std::to_string(k) +
                                " unsupported for degree " + std::to_string(kv.degree()));
  }
  const int p = kv.degree();
  const int span = kv.find_span(x);
  const auto& knots = kv.knots();

  BasisDerivs out;
  out.first = span - p;
  out.count = p + 1;
  out.order = k;

  // Column j: start from the degree p-j values on this span and apply j
  // knot-difference steps, each raising the degree and derivative order by
  // one. Empty-span quotients (0/0) drop out as zeros.
  for (int j = 0; j <= k; ++j) {
    std::array<double, kMaxDegree + 2> work{};
    const int q0 = p - j;
    basis_funs(knots, span, x, q0, std::span<double>(work.data(), static_cast<std::size_t>(q0 + 1)));
    // work[r] currently holds D^0 B_{span-q0+r, q0}.
    for (int q = q0 + 1; q <= p; ++q) {
      // In-place from high index down: new[r] over functions span-q+r.
      std::array<double, kMaxDegree + 2> next{};
      for (int r = 0; r <= q; ++r) {
        const int a = span - q + r;
        double term = 0.0;
        const double den1 = knots[static_cast<std::size_t>(a + q)] - knots[static_cast<std::size_t>(a)];
        if (den1 > 0.0 && r >= 1) term += work[static_cast<std::size_t>(r - 1)] / den1;
        const double den2 =
            knots[static_cast<std::size_t>(a + q + 1)] - knots[static_cast<std::size_t>(a + 1)];
        if (den2 > 0.0 && r <= q - 1) term -= work[static_cast<std::size_t>(r)] / den2;
        next[static_cast<std::size_t>(r)] = q * term;
      }
      work = next;
    }
    for (int r = 0; r <= p; ++r) {
      out.d[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] = work[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

TensorSpace::TensorSpace(std::vector<KnotVector> directions)
    : directions_(std::move(directions)) {
  if (directions_.empty() || directions_.size() > 4) {
    throw std::invalid_argument("tensor space: need 1 to 4 directions");
  }
  const int p = directions_.front().degree();
  size_ = 1;
  for (const auto& kv : directions_) {
    if (kv.degree() != p) {
      throw std::invalid_argument("tensor space: all directions must share the degree");
    }
    size_ *= static_cast<std::size_t>(kv.count());
  }
}

std::size_t TensorSpace::flat_index(std::span<const int> multi) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    flat = flat * static_cast<std::size_t>(directions_[static_cast<std::size_t>(a)].count()) +
           static_cast<std::size_t>(multi[static_cast<std::size_t>(a)]);
  }
  return flat;
}

void TensorSpace::unflatten(std::size_t flat, std::span<int> multi) const {
  for (int a = dim() - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(directions_[static_cast<std::size_t>(a)].count());
    multi[static_cast<std::size_t>(a)] = static_cast<int>(flat % n);
    flat /= n;
  }
}

void tensor_eval(const TensorSpace& space, std::span<const double> xi, int order,
                 TensorBasisValues& out) {
  if (order < 0 || order > 2) {
    throw std::invalid_argument("tensor_eval: derivative order must be 0, 1 or 2");
  }
  const int dim = space.dim();
  const int p = space.degree();

  std::array<BasisDerivs, 4> uni;
  out.dim = dim;
  out.order = order;
  out.count = 1;
  for (int a = 0; a < dim; ++a) {
    uni[static_cast<std::size_t>(a)] =
        eval_basis_derivatives(space.direction(a), xi[static_cast<std::size_t>(a)],
                               std::min(order, p));
    out.first[static_cast<std::size_t>(a)] = uni[static_cast<std::size_t>(a)].first;
    out.counts[static_cast<std::size_t>(a)] = uni[static_cast<std::size_t>(a)].count;
    out.count *= uni[static_cast<std::size_t>(a)].count;
  }
  const int uni_order = std::min(order, p);

  const auto n = static_cast<std::size_t>(out.count);
  out.global.resize(n);
  out.value.resize(n);
  out.grad.assign(order >= 1 ? n * static_cast<std::size_t>(dim) : 0, 0.0);
  out.hess.assign(order >= 2 ? n * static_cast<std::size_t>(dim * dim) : 0, 0.0);

  std::array<int, 4> loc{};
  std::array<int, 4> multi{};
  for (int j = 0; j < out.count; ++j) {
    int rem = j;
    for (int a = dim - 1; a >= 0; --a) {
      loc[static_cast<std::size_t>(a)] = rem % (p + 1);
      rem /= (p + 1);
      multi[static_cast<std::size_t>(a)] =
          out.first[static_cast<std::size_t>(a)] + loc[static_cast<std::size_t>(a)];
    }
    out.global[static_cast<std::size_t>(j)] =
        space.flat_index(std::span<const int>(multi.data(), static_cast<std::size_t>(dim)));

    double v = 1.0;
    for (int a = 0; a < dim; ++a) {
      v *= uni[static_cast<std::size_t>(a)].value(loc[static_cast<std::size_t>(a)]);
    }
    out.value[static_cast<std::size_t>(j)] = v;

    if (order >= 1) {
      for (int a = 0; a < dim; ++a) {
        double g = 1.0;
        for (int b = 0; b < dim; ++b) {
          const auto& u = uni[static_cast<std::size_t>(b)];
          g *= (b == a) ? u.deriv(1, loc[static_cast<std::size_t>(b)])
                        : u.value(loc[static_cast<std::size_t>(b)]);
        }
        out.grad[static_cast<std::size_t>(j * dim + a)] = g;
      }
    }
    if (order >= 2) {
      for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
          double hval = 1.0;
          for (int c = 0; c < dim; ++c) {
            const auto& u = uni[static_cast<std::size_t>(c)];
            int d_order = (c == a ? 1 : 0) + (c == b ? 1 : 0);
            // Degree-1 splines have no second derivative; the basis is then
            // not smooth enough and uni_order < 2 guards the access.
            if (d_order > uni_order) {
              hval = 0.0;
              break;
            }
            hval *= u.deriv(d_order, loc[static_cast<std::size_t>(c)]);
          }
          out.hess[static_cast<std::size_t>((j * dim + a) * dim + b)] = hval;
          out.hess[static_cast<std::size_t>((j * dim + b) * dim + a)] = hval;
        }
      }
    }
  }
}

void nurbs_eval(const TensorSpace& space, std::span<const double> weights,
                std::span<const double> xi, int order, TensorBasisValues& out) {
  if (weights.size() != space.size()) {
    throw std::invalid_argument("nurbs_eval: weight count does not match the space");
  }
  tensor_eval(space, xi, order, out);

  bool unit = true;
  for (int j = 0; j < out.count; ++j) {
    const double w = weights[out.global[static_cast<std::size_t>(j)]];
    if (w <= 0.0) throw std::domain_error("nurbs_eval: weights must be positive");
    if (w != 1.0) unit = false;
  }
  if (unit) return;

  const int dim = out.dim;
  // Weighting function W and its derivatives from the local B-spline data.
  double W = 0.0;
  std::array<double, 4> Wg{};
  std::array<double, 16> Wh{};
  for (int j = 0; j < out.count; ++j) {
    const double w = weights[out.global[static_cast<std::size_t>(j)]];
    W += w * out.value[static_cast<std::size_t>(j)];
    if (order >= 1) {
      for (int a = 0; a < dim; ++a) Wg[static_cast<std::size_t>(a)] += w * out.g(j, a);
    }
    if (order >= 2) {
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
          Wh[static_cast<std::size_t>(a * dim + b)] += w * out.h(j, a, b);
        }
      }
    }
  }

  for (int j = 0; j < out.count; ++j) {
    const double w = weights[out.global[static_cast<std::size_t>(j)]];
    const double r = w * out.value[static_cast<std::size_t>(j)] / W;
    std::array<double, 4> rg{};
    if (order >= 1) {
      for (int a = 0; a < dim; ++a) {
        rg[static_cast<std::size_t>(a)] =
            (w * out.g(j, a) - r * Wg[static_cast<std::size_t>(a)]) / W;
      }
    }
    if (order >= 2) {
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
          const double num = w * out.h(j, a, b) -
                             rg[static_cast<std::size_t>(a)] * Wg[static_cast<std::size_t>(b)] -
                             rg[static_cast<std::size_t>(b)] * Wg[static_cast<std::size_t>(a)] -
                             r * Wh[static_cast<std::size_t>(a * dim + b)];
          out.hess[static_cast<std::size_t>((j * dim + a) * dim + b)] = num / W;
        }
      }
    }
    out.value[static_cast<std::size_t>(j)] = r;
    if (order >= 1) {
      for (int a = 0; a < dim; ++a) {
        out.grad[static_cast<std::size_t>(j * dim + a)] = rg[static_cast<std::size_t>(a)];
      }
    }
  }
}

double greville(const KnotVector& kv, int i) {
  double s = 0.0;
  for (int j = 1; j <= kv.degree(); ++j) s += kv.knot(i + j);
  return s / kv.degree();
}

void require_continuity(const TensorSpace& space, int required_continuity,
                        const std::string& context) {
  for (int a = 0; a < space.dim(); ++a) {
    const auto& kv = space.direction(a);
    const auto breaks = kv.breakpoints();
    for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
      const int m = kv.multiplicity(breaks[i]);
      if (kv.degree() - m < required_continuity) {
        throw std::invalid_argument(
            context + ": basis must be C^" + std::to_string(required_continuity) +
            " but knot " + std::to_string(breaks[i]) + " in direction " + std::to_string(a) +
            " has multiplicity " + std::to_string(m) + " (degree " +
            std::to_string(kv.degree()) + ")");
      }
    }
  }
}

}  // namespace stiga
