#include "stiga/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "stiga/quadrature.hpp"

namespace stiga {

GeometryMap::GeometryMap(TensorSpace space, std::vector<double> weights,
                         std::vector<double> points)
    : space_(std::move(space)), weights_(std::move(weights)), points_(std::move(points)) {
  if (weights_.size() != space_.size()) {
    throw std::invalid_argument("geometry: weight count does not match the space");
  }
  if (points_.size() != space_.size() * static_cast<std::size_t>(space_.dim())) {
    throw std::invalid_argument("geometry: control point count does not match the space");
  }
  for (double w : weights_) {
    if (w <= 0.0) throw std::domain_error("geometry: weights must be positive");
  }
}

GeometryMap GeometryMap::box(TensorSpace space, std::span<const double> extents) {
  const int dim = space.dim();
  if (static_cast<int>(extents.size()) != dim) {
    throw std::invalid_argument("geometry box: need one extent per direction");
  }
  for (double e : extents) {
    if (!(e > 0.0)) throw std::invalid_argument("geometry box: extents must be positive");
  }
  std::vector<double> weights(space.size(), 1.0);
  std::vector<double> points(space.size() * static_cast<std::size_t>(dim));
  std::array<int, 4> multi{};
  for (std::size_t flat = 0; flat < space.size(); ++flat) {
    space.unflatten(flat, std::span<int>(multi.data(), static_cast<std::size_t>(dim)));
    for (int a = 0; a < dim; ++a) {
      points[flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)] =
          extents[static_cast<std::size_t>(a)] *
          greville(space.direction(a), multi[static_cast<std::size_t>(a)]);
    }
  }
  return GeometryMap(std::move(space), std::move(weights), std::move(points));
}

Eigen::VectorXd GeometryMap::map_point(std::span<const double> xi) const {
  const int dim = space_.dim();
  TensorBasisValues basis;
  nurbs_eval(space_, weights_, xi, 0, basis);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < basis.count; ++j) {
    const auto p = control_point(basis.global[static_cast<std::size_t>(j)]);
    for (int a = 0; a < dim; ++a) {
      x[a] += basis.value[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(a)];
    }
  }
  return x;
}

GeomEval GeometryMap::eval(std::span<const double> xi, int order) const {
  const int dim = space_.dim();
  TensorBasisValues basis;
  nurbs_eval(space_, weights_, xi, std::max(order, 1), basis);

  GeomEval out;
  out.x = Eigen::VectorXd::Zero(dim);
  out.jac = Eigen::MatrixXd::Zero(dim, dim);
  if (order >= 2) out.hess.assign(static_cast<std::size_t>(dim), Eigen::MatrixXd::Zero(dim, dim));

  for (int j = 0; j < basis.count; ++j) {
    const auto p = control_point(basis.global[static_cast<std::size_t>(j)]);
    for (int c = 0; c < dim; ++c) {
      out.x[c] += basis.value[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(c)];
      for (int a = 0; a < dim; ++a) {
        out.jac(c, a) += basis.g(j, a) * p[static_cast<std::size_t>(c)];
        if (order >= 2) {
          for (int b = 0; b < dim; ++b) {
            out.hess[static_cast<std::size_t>(c)](a, b) +=
                basis.h(j, a, b) * p[static_cast<std::size_t>(c)];
          }
        }
      }
    }
  }

  out.det = out.jac.determinant();
  if (std::abs(out.det) < 1e-14) {
    throw std::runtime_error("geometry: degenerate map, |det grad Phi| < 1e-14");
  }
  out.inv = out.jac.inverse();
  return out;
}

Mesh build_mesh(const GeometryMap& geometry, int q) {
  const int dim = geometry.dim();
  const auto& space = geometry.space();

  // Nonempty spans per direction.
  std::array<std::vector<int>, 4> spans;
  for (int a = 0; a < dim; ++a) {
    const auto& kv = space.direction(a);
    for (int i = kv.degree(); i < kv.count(); ++i) {
      if (kv.knot(i + 1) > kv.knot(i)) spans[static_cast<std::size_t>(a)].push_back(i);
    }
  }

  Mesh mesh;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= spans[static_cast<std::size_t>(a)].size();
  mesh.elements.reserve(total);

  std::array<int, 4> idx{};
  for (std::size_t e = 0; e < total; ++e) {
    std::size_t rem = e;
    Element el;
    for (int a = dim - 1; a >= 0; --a) {
      const auto& sa = spans[static_cast<std::size_t>(a)];
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % sa.size());
      rem /= sa.size();
      const int s = sa[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      el.spans[static_cast<std::size_t>(a)] = s;
      el.lo[static_cast<std::size_t>(a)] = space.direction(a).knot(s);
      el.hi[static_cast<std::size_t>(a)] = space.direction(a).knot(s + 1);
    }
    double diam2 = 0.0;
    double vol = 1.0;
    for (int a = 0; a < dim; ++a) {
      const double len = el.hi[static_cast<std::size_t>(a)] - el.lo[static_cast<std::size_t>(a)];
      diam2 += len * len;
      vol *= len;
    }
    el.diam_param = std::sqrt(diam2);
    el.volume_param = vol;

    // ||grad Phi||_(L^inf(K)) ~ max spectral norm over the quadrature points.
    const QuadRule rule = element_rule(q, el, dim);
    double norm = 0.0;
    for (int i = 0; i < rule.count; ++i) {
      const GeomEval g = geometry.eval(rule.point(i), 1);
      if (g.det <= 0.0) {
        throw std::runtime_error("geometry: det grad Phi must be positive on every element");
      }
      norm = std::max(norm, g.jac.jacobiSvd().singularValues()[0]);
    }
    el.h_phys = norm * el.diam_param;
    mesh.elements.push_back(el);
  }

  double hmin = mesh.elements.front().h_phys;
  for (const auto& el : mesh.elements) {
    mesh.h = std::max(mesh.h, el.h_phys);
    hmin = std::min(hmin, el.h_phys);
  }
  mesh.uniformity_ratio = mesh.h / hmin;
  return mesh;
}

}  // namespace stiga
