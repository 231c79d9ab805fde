#pragma once

#include <Eigen/Core>

#include "capax/field.hpp"

namespace capax {

/// Quantities of the metric g = (1 - f)^2 delta with f = -tanh(log u / (n - 2)).
/// Vectors and tensors are components in the Euclidean chart.
struct ConformalSample {
  FieldSample base;
  int n = 3;
  double f = 0.0;
  Eigen::VectorXd grad_f_euclidean;
  Eigen::MatrixXd hess_f_euclidean;
  Eigen::MatrixXd nabla2_f;
  double laplacian_g_f = 0.0;          // trace of nabla2_f with respect to g
  double laplacian_g_f_formula = 0.0;  // -n f |grad f|_g^2 / (1 - f^2)
  double norm_grad_f_g_sq = 0.0;
  double P = 0.0;                      // |grad f|_g^2 / (1 - f^2)
  double P_from_u = 0.0;               // u^{-2(n-1)/(n-2)} |Du / (n-2)|^2
  double scalar_curvature_R = 0.0;     // n (n-1) P
  double scalar_curvature_conformal = 0.0;  // from the conformal factor directly
  Eigen::VectorXd grad_P_euclidean;
  Eigen::VectorXd X;
  double divX_closed = 0.0;
};

/// Throws DomainOfDefinition unless 0 < u < 1.
ConformalSample lift(const FieldSample& sample);

/// |trace_g nabla2 f - formula| relative to max(|formula|, |grad f|_g^2).
double laplacian_consistency(const ConformalSample& cs);

/// Ricci tensor of g from the conformal factor phi = log(1 - f).
Eigen::MatrixXd ricci_conformal(const ConformalSample& cs);
/// Ricci tensor of g from f, nabla2_f and P.
Eigen::MatrixXd ricci_system(const ConformalSample& cs);
/// Max-entry relative difference of the two Ricci tensors.
double ricci_identity_residual(const ConformalSample& cs);

struct DivXRoutes {
  double fd = 0.0;
  double closed = 0.0;
  double relative_difference(double floor = 0.0) const;
};

/// Div_g X by central differences of X with step h against the closed form.
/// Requires distance_to_boundary >= 6 h.
DivXRoutes divX_two_routes(const PotentialField& field, const Eigen::VectorXd& x, double h);

struct EllipticForm {
  double laplacian_g_R = 0.0;
  double drift = 0.0;  // (n-2) <grad f / (1 + f), grad R>_g
  double value() const { return laplacian_g_R - drift; }
};

/// Delta_g R - (n-2) <grad f/(1+f), grad R>_g with second derivatives of R by central
/// differences (third derivatives of u) at step h.
EllipticForm elliptic_R_form(const PotentialField& field, const Eigen::VectorXd& x, double h);

struct LevelCurvature {
  double H_g = 0.0;
  double H_euclidean = 0.0;  // mean curvature of the u-level set, normal -Du/|Du|
};

/// Throws UndefinedNormal at critical points.
LevelCurvature level_mean_curvature_g(const ConformalSample& cs);

/// Max entry of nabla2_f - (Delta_g f / n) g in a g-orthonormal frame.
double proportionality_residual(const ConformalSample& cs);

}  // namespace capax
