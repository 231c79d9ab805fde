#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "capax/bem.hpp"

namespace capax {

/// Potential and its first two derivatives at one exterior point.
struct FieldSample {
  Eigen::VectorXd x;
  double u = 0.0;
  Eigen::VectorXd Du;
  Eigen::MatrixXd D2u;
  int n = 3;
  double distance_to_boundary = 0.0;
};

/// Exterior capacitary potential: u = 1 on the boundary, u -> 0 at infinity.
class PotentialField {
 public:
  virtual ~PotentialField() = default;

  virtual int dimension() const = 0;
  virtual double capacity() const = 0;
  /// Throws OutOfContract where the representation is not trustworthy.
  virtual FieldSample sample(const Eigen::VectorXd& x) const = 0;
  /// u and Du only (D2u left empty).
  virtual FieldSample value_grad(const Eigen::VectorXd& x) const { return sample(x); }
  /// Cheap admissibility test matching the contract of sample().
  virtual bool in_contract(const Eigen::VectorXd& x) const = 0;
  /// Distance from the center of the domain to its boundary along `dir` (unit).
  virtual double boundary_radius(const Eigen::VectorXd& dir) const = 0;
  virtual Eigen::VectorXd center() const { return Eigen::VectorXd::Zero(dimension()); }
  /// Largest |x| over the boundary.
  virtual double circumradius() const = 0;
};

/// Field of a BEM single-layer solution, with adaptive quadrature on nearby panels.
class BemField final : public PotentialField {
 public:
  /// Points closer than `contract_ratio` panel diameters to the surface are rejected.
  explicit BemField(BemSolution sol, double contract_ratio = 0.5);

  int dimension() const override { return 3; }
  double capacity() const override { return sol_.capacity; }
  FieldSample sample(const Eigen::VectorXd& x) const override;
  FieldSample value_grad(const Eigen::VectorXd& x) const override;
  bool in_contract(const Eigen::VectorXd& x) const override;
  double boundary_radius(const Eigen::VectorXd& dir) const override;
  Eigen::VectorXd center() const override;
  double circumradius() const override { return circumradius_; }

  const BemSolution& solution() const { return sol_; }
  const SurfaceMesh& mesh() const { return *sol_.mesh; }
  double max_boundary_gradient() const { return sol_.boundary_grad.maxCoeff(); }

  /// Node-based distance estimate to the surface and the nearest panel's diameter.
  std::pair<double, double> clearance(const Eigen::Vector3d& x) const;

 private:
  FieldSample evaluate_impl(const Eigen::Vector3d& x, int order) const;

  BemSolution sol_;
  double contract_ratio_;
  double circumradius_ = 0.0;
  std::vector<double> nx_, ny_, nz_, nq_;
};

/// Convenience wrapper: builds a BemField and samples at x.
FieldSample evaluate(const BemSolution& sol, const Eigen::Vector3d& x);

struct AsymptoticsRow {
  double radius = 0.0;
  double u_residual = 0.0;
  double grad_residual = 0.0;
  double hess_residual = 0.0;
};

/// Relative deviation from the monopole Cap |x|^{2-n} and its derivatives over a
/// spherical sample at each radius. Radii must be at least 5 circumradii.
std::vector<AsymptoticsRow> asymptotics_check(const PotentialField& field, const std::vector<double>& radii,
                                              std::size_t directions = 64);

}  // namespace capax
