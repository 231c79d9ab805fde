#pragma once

#include <array>
#include <vector>

namespace capax::quadrature {

/// Point of a triangle rule in reference coordinates; weights sum to one.
struct TrianglePoint {
  double xi;
  double eta;
  double weight;
};

/// Seven-point rule exact for polynomials of degree five.
const std::array<TrianglePoint, 7>& triangle7();

struct GaussRule {
  std::vector<double> nodes;    // in [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Cached per n; thread-safe.
const GaussRule& gauss_legendre(int n);

}  // namespace capax::quadrature
