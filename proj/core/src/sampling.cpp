#include "capax/sampling.hpp"

#include <cmath>
#include <numbers>

namespace capax {

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<Eigen::Vector3d> halton3(std::size_t count, std::uint64_t skip) {
  std::vector<Eigen::Vector3d> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t k = skip + i + 1;
    pts[i] = {radical_inverse(k, 2), radical_inverse(k, 3), radical_inverse(k, 5)};
  }
  return pts;
}

std::vector<Eigen::Vector3d> fibonacci_sphere(std::size_t count) {
  std::vector<Eigen::Vector3d> d(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    d[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return d;
}

std::vector<Eigen::Vector3d> exterior_points(std::size_t count, std::uint64_t seed, double r_min_factor,
                                             double r_max_factor) {
  const auto h = halton3(count, 1000 * seed);
  std::vector<Eigen::Vector3d> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 2.0 * h[i].x() - 1.0;
    const double phi = 2.0 * std::numbers::pi * h[i].y();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double r = r_min_factor + (r_max_factor - r_min_factor) * h[i].z();
    out[i] = r * Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), z);
  }
  return out;
}

}  // namespace capax
