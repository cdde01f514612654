#pragma once

#include <vector>

namespace magweyl {

/// Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxQuadratureNodes = 64;

/// n-point rule on [0,1], exact for polynomials of degree <= 2n-1.
/// Rules are built once and cached; the returned reference stays valid.
const QuadratureRule& gauss_legendre_unit(int n);

/// Smallest node count integrating every polynomial of degree <= `degree` exactly.
inline int nodes_for_degree(int degree) { return degree < 1 ? 1 : (degree + 2) / 2; }

}  // namespace magweyl
