#pragma once

#include <span>
#include <vector>

namespace stiga {

struct Element;

/// Gauss-Legendre rule with q nodes on [0,1]; exact for polynomials of
/// degree 2q-1. Rules are computed once per q and cached.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Rule1D& gauss_legendre(int q);

/// Tensor-product rule over a parametric element (or one of its faces).
/// Points carry full (d+1)-dimensional coordinates even for faces; weights
/// are parametric, summing to the element volume resp. face area.
struct QuadRule {
  int dim = 0;
  int count = 0;
  std::vector<double> points;   // count * dim
  std::vector<double> weights;  // count

  std::span<const double> point(int i) const {
    return {points.data() + static_cast<std::size_t>(i * dim), static_cast<std::size_t>(dim)};
  }
};

/// Face of the parametric cylinder: coordinate `axis` frozen at side 0 or 1.
/// The top face Sigma_T is {axis = dim-1, side = 1}, the initial face
/// Sigma_0 is {axis = dim-1, side = 0}; smaller axes give lateral faces.
struct Face {
  int axis = 0;
  int side = 1;
};

inline Face sigma_t_face(int dim) { return {dim - 1, 1}; }
inline Face sigma_0_face(int dim) { return {dim - 1, 0}; }

QuadRule element_rule(int q, const Element& element, int dim);

/// Rule on the element face lying in the given cylinder face. The element
/// must actually touch that face.
QuadRule face_rule(int q, const Element& element, Face face, int dim);

}  // namespace stiga
