#include "stiga/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "stiga/geometry.hpp"

namespace stiga {

namespace {

// Legendre P_q and P_q' at x by the three-term recurrence.
std::pair<double, double> legendre(int q, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= q; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = q * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

Rule1D compute_rule(int q) {
  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(q));
  rule.weights.resize(static_cast<std::size_t>(q));
  if (q == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }
  for (int i = 0; i < (q + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton to 1e-15.
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, d] = legendre(q, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map (-1,1) -> (0,1); nodes come out descending in x, store symmetric pair.
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.nodes[static_cast<std::size_t>(q - 1 - i)] = 0.5 * (1.0 + x);
    rule.weights[static_cast<std::size_t>(q - 1 - i)] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const Rule1D& gauss_legendre(int q) {
  if (q < 1 || q > 64) throw std::invalid_argument("gauss_legendre: need 1 <= q <= 64");
  static std::map<int, Rule1D> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_rule(q)).first;
  return it->second;
}

namespace {

// Tensor rule with the coordinate `frozen_axis` pinned to `frozen_value`
// (frozen_axis < 0 for a full volume rule).
QuadRule tensor_rule(int q, const Element& element, int dim, int frozen_axis,
                     double frozen_value) {
  const Rule1D& g = gauss_legendre(q);
  QuadRule rule;
  rule.dim = dim;
  rule.count = 1;
  for (int a = 0; a < dim; ++a) {
    if (a != frozen_axis) rule.count *= q;
  }
  rule.points.resize(static_cast<std::size_t>(rule.count * dim));
  rule.weights.assign(static_cast<std::size_t>(rule.count), 1.0);

  for (int i = 0; i < rule.count; ++i) {
    int rem = i;
    for (int a = dim - 1; a >= 0; --a) {
      double coord;
      if (a == frozen_axis) {
        coord = frozen_value;
      } else {
        const int ia = rem % q;
        rem /= q;
        const double len = element.hi[static_cast<std::size_t>(a)] -
                           element.lo[static_cast<std::size_t>(a)];
        coord = element.lo[static_cast<std::size_t>(a)] +
                len * g.nodes[static_cast<std::size_t>(ia)];
        rule.weights[static_cast<std::size_t>(i)] *= len * g.weights[static_cast<std::size_t>(ia)];
      }
      rule.points[static_cast<std::size_t>(i * dim + a)] = coord;
    }
  }
  return rule;
}

}  // namespace

QuadRule element_rule(int q, const Element& element, int dim) {
  if (q < 1) throw std::invalid_argument("element_rule: q must be >= 1");
  return tensor_rule(q, element, dim, -1, 0.0);
}

QuadRule face_rule(int q, const Element& element, Face face, int dim) {
  if (q < 1) throw std::invalid_argument("face_rule: q must be >= 1");
  if (face.axis < 0 || face.axis >= dim) throw std::invalid_argument("face_rule: bad axis");
  const double value = face.side == 0 ? 0.0 : 1.0;
  const double coord = face.side == 0 ? element.lo[static_cast<std::size_t>(face.axis)]
                                      : element.hi[static_cast<std::size_t>(face.axis)];
  if (coord != value) {
    throw std::invalid_argument("face_rule: element does not touch the requested face");
  }
  return tensor_rule(q, element, dim, face.axis, value);
}

}  // namespace stiga
