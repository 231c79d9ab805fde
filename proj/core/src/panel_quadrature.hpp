#pragma once

#include <vector>

#include <Eigen/Core>

#include "capax/geometry.hpp"

namespace capax::detail {

struct QuadNode {
  Eigen::Vector3d y;
  double w;
};

/// Default refinement parameters shared by assembly and field evaluation.
struct NearFieldRule {
  double eta = 3.0;      // subdivide while distance < eta * size
  int max_depth = 8;
  int self_order = 12;   // Gauss-Legendre points per Duffy direction
};

inline bool is_near(const SurfaceMesh& mesh, std::size_t j, const Eigen::Vector3d& x, double eta) {
  return (x - mesh.centroid(j)).norm() < eta * mesh.diameter(j);
}

/// Appends adaptively refined quadrature nodes of panel j for a target point x.
void adaptive_nodes(const SurfaceMesh& mesh, std::size_t j, const Eigen::Vector3d& x,
                    const NearFieldRule& rule, std::vector<QuadNode>& out);

/// Appends nodes for a target lying on panel j at reference point (xi, eta).
/// The panel is split at that point and each part is Duffy-transformed.
void singular_nodes(const SurfaceMesh& mesh, std::size_t j, double xi, double eta,
                    const NearFieldRule& rule, std::vector<QuadNode>& out);

}  // namespace capax::detail
