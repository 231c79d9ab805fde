#pragma once

#include <memory>

#include <Eigen/Core>

#include "capax/geometry.hpp"

namespace capax {

struct BemOptions {
  /// Dense LU up to this many panels, matrix-free GMRES above.
  std::size_t dense_limit = 20000;
  /// Panels closer than near_ratio * diameter to a collocation point are subdivided.
  double near_ratio = 3.0;
  int max_depth = 8;
  int self_order = 12;
  double min_rcond = 1e-14;
  double residual_tol = 1e-10;
  int gmres_restart = 60;
  int gmres_max_iterations = 600;
};

/// Single-layer charge density on the panels of a mesh, kernel |x - y|^{-1}.
struct BemSolution {
  std::shared_ptr<const SurfaceMesh> mesh;
  Eigen::VectorXd sigma;
  double capacity = 0.0;
  Eigen::VectorXd boundary_grad;
  double solve_residual = 0.0;
  double rcond = 0.0;
  bool iterative = false;
  int iterations = 0;
  BemOptions options;

  double min_sigma() const { return sigma.minCoeff(); }
};

BemSolution assemble_and_solve(std::shared_ptr<const SurfaceMesh> mesh, const BemOptions& options = {});
BemSolution assemble_and_solve(const SurfaceMesh& mesh, const BemOptions& options = {});

/// |Du| per panel from the density jump; the interior extension of u is constant.
Eigen::VectorXd boundary_gradient(const BemSolution& sol);

struct CapacityRoutes {
  double charge = 0.0;
  double flux = 0.0;
  double pohozaev = 0.0;

  double max_pairwise_spread() const;
};

CapacityRoutes capacity_crosschecks(const BemSolution& sol);

/// Dense collocation matrix; exposed for tests and benchmarks.
Eigen::MatrixXd assemble_matrix(const SurfaceMesh& mesh, const BemOptions& options = {});

}  // namespace capax
