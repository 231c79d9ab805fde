#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace capax {

/// Radical inverse of `index` in `base`.
double radical_inverse(std::uint64_t index, int base);

/// Points of the 3-d Halton sequence in [0,1)^3 starting after `skip` terms.
std::vector<Eigen::Vector3d> halton3(std::size_t count, std::uint64_t skip);

/// Nearly uniform unit vectors on the sphere (spherical Fibonacci lattice).
std::vector<Eigen::Vector3d> fibonacci_sphere(std::size_t count);

/// Seeded quasi-random unit directions scaled by a factor in [r_min_factor, r_max_factor].
/// Callers multiply by the boundary radius along each direction. The seed offsets the sequence.
std::vector<Eigen::Vector3d> exterior_points(std::size_t count, std::uint64_t seed, double r_min_factor,
                                             double r_max_factor);

}  // namespace capax
