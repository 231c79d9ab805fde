#pragma once

#include <Eigen/Core>

#include "capax/field.hpp"

namespace capax {

/// |S^{n-1}|.
double sphere_area(int n);
/// |B^n|.
double ball_volume(int n);

/// Exact potential of the ball of radius rho centered at the origin in R^n.
class BallField final : public PotentialField {
 public:
  BallField(double radius, int n);

  int dimension() const override { return n_; }
  double capacity() const override;
  FieldSample sample(const Eigen::VectorXd& x) const override;
  bool in_contract(const Eigen::VectorXd& x) const override { return x.size() == n_ && x.norm() >= rho_; }
  double boundary_radius(const Eigen::VectorXd&) const override { return rho_; }
  double circumradius() const override { return rho_; }

  double radius() const { return rho_; }

 private:
  double rho_;
  int n_;
};

FieldSample ball_field(double radius, int n, const Eigen::VectorXd& x);

/// Cap = 2 / int_0^inf dxi / sqrt((a^2+xi)(b^2+xi)(c^2+xi)) by adaptive quadrature.
double ellipsoid_capacity(double a, double b, double c);

/// Closed form for a prolate spheroid a > b = c.
double prolate_capacity(double a, double b);

struct CurvatureExtremes {
  double max_h = 0.0;
  double min_h = 0.0;
};

/// Extremes of the mean curvature (sum of principal curvatures) of an ellipsoid by a
/// dense parameter sweep followed by local refinement.
CurvatureExtremes ellipsoid_curvature_extremes(double a, double b, double c);

/// Exact exterior potential of an axis-aligned ellipsoid centered at the origin,
/// through the ellipsoidal coordinate lambda.
class EllipsoidField final : public PotentialField {
 public:
  EllipsoidField(double a, double b, double c);

  int dimension() const override { return 3; }
  double capacity() const override { return cap_; }
  FieldSample sample(const Eigen::VectorXd& x) const override;
  bool in_contract(const Eigen::VectorXd& x) const override;
  double boundary_radius(const Eigen::VectorXd& dir) const override;
  double circumradius() const override { return a2_.cwiseSqrt().maxCoeff(); }

  /// Ellipsoidal coordinate: largest root of sum x_i^2 / (a_i^2 + lambda) = 1.
  double lambda(const Eigen::Vector3d& x) const;

 private:
  double tail_integral(double lambda) const;

  Eigen::Vector3d a2_;
  double cap_;
};

}  // namespace capax
