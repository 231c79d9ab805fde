#include "capax/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "capax/errors.hpp"

namespace capax {

namespace {

Eigen::VectorXd grad_P(const FieldSample& s) {
  const double m = s.n - 2.0;
  const double alpha = 2.0 * (s.n - 1.0) / m;
  const double ua = std::pow(s.u, -alpha);
  const double g2 = s.Du.squaredNorm();
  return (-alpha * ua / s.u * g2 * s.Du + 2.0 * ua * (s.D2u * s.Du)) / (m * m);
}

}  // namespace

ConformalSample lift(const FieldSample& s) {
  if (!(s.u > 0.0 && s.u < 1.0)) throw Error(ErrorKind::DomainOfDefinition, "lift needs 0 < u < 1");
  const int n = s.n;
  const double m = n - 2.0;
  ConformalSample c;
  c.base = s;
  c.n = n;
  c.f = -std::tanh(std::log(s.u) / m);
  const double f = c.f;
  const double one_m = 1.0 - f;
  const double q = 1.0 - f * f;

  const double dfdu = -std::pow((1.0 + f) / one_m, 0.5 * m) * q / m;
  c.grad_f_euclidean = dfdu * s.Du;
  const Eigen::VectorXd& Df = c.grad_f_euclidean;
  const double df2 = Df.squaredNorm();
  c.hess_f_euclidean = (m - 2.0 * f) / q * (Df * Df.transpose()) + dfdu * s.D2u;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  c.nabla2_f = c.hess_f_euclidean + (2.0 * Df * Df.transpose() - df2 * I) / one_m;
  c.norm_grad_f_g_sq = df2 / (one_m * one_m);
  c.laplacian_g_f = c.nabla2_f.trace() / (one_m * one_m);
  c.P = c.norm_grad_f_g_sq / q;
  c.laplacian_g_f_formula = -n * f * c.P;
  c.P_from_u = std::pow(s.u, -2.0 * (n - 1.0) / m) * s.Du.squaredNorm() / (m * m);
  c.scalar_curvature_R = n * (n - 1.0) * c.P;

  // phi = log(1 - f): R = -e^{-2 phi} (2(n-1) Delta phi + (n-2)(n-1) |D phi|^2)
  const Eigen::VectorXd Dphi = -Df / one_m;
  const double lap_f = c.hess_f_euclidean.trace();
  const double lap_phi = -lap_f / one_m - df2 / (one_m * one_m);
  c.scalar_curvature_conformal =
      -(2.0 * (n - 1.0) * lap_phi + (n - 2.0) * (n - 1.0) * Dphi.squaredNorm()) / (one_m * one_m);

  if (s.D2u.size() > 0) {
    c.grad_P_euclidean = grad_P(s);
    c.X = std::pow(1.0 + f, 2.0 - n) / (one_m * one_m) * c.grad_P_euclidean;
  }
  const double hess_norm_sq = c.nabla2_f.squaredNorm() / std::pow(one_m, 4);
  c.divX_closed = 2.0 / (one_m * std::pow(1.0 + f, n - 1.0)) *
                  (hess_norm_sq - c.laplacian_g_f * c.laplacian_g_f / n);
  return c;
}

double laplacian_consistency(const ConformalSample& cs) {
  const double scale = std::max(std::abs(cs.laplacian_g_f_formula), cs.norm_grad_f_g_sq);
  return std::abs(cs.laplacian_g_f - cs.laplacian_g_f_formula) / (scale + 1e-300);
}

Eigen::MatrixXd ricci_conformal(const ConformalSample& cs) {
  const int n = cs.n;
  const double one_m = 1.0 - cs.f;
  const Eigen::VectorXd& Df = cs.grad_f_euclidean;
  const Eigen::VectorXd Dphi = -Df / one_m;
  const Eigen::MatrixXd D2phi = -cs.hess_f_euclidean / one_m - Df * Df.transpose() / (one_m * one_m);
  const double lap_phi = D2phi.trace();
  return -(n - 2.0) * (D2phi - Dphi * Dphi.transpose()) +
         (-lap_phi - (n - 2.0) * Dphi.squaredNorm()) * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd ricci_system(const ConformalSample& cs) {
  const int n = cs.n;
  const double one_m = 1.0 - cs.f;
  const Eigen::MatrixXd g = one_m * one_m * Eigen::MatrixXd::Identity(n, n);
  return (n - 2.0) / one_m * cs.nabla2_f + (n - 1.0 - cs.f) / one_m * cs.P * g;
}

double ricci_identity_residual(const ConformalSample& cs) {
  const Eigen::MatrixXd a = ricci_conformal(cs);
  const Eigen::MatrixXd b = ricci_system(cs);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / (scale + 1e-300);
}

double DivXRoutes::relative_difference(double floor) const {
  return std::abs(fd - closed) / std::max(std::abs(closed), floor);
}

DivXRoutes divX_two_routes(const PotentialField& field, const Eigen::VectorXd& x, double h) {
  const FieldSample s0 = field.sample(x);
  if (s0.distance_to_boundary < 6.0 * h)
    throw Error(ErrorKind::Clearance, "divergence stencil needs 6h clearance from the boundary");
  const ConformalSample c0 = lift(s0);
  const int n = c0.n;
  DivXRoutes r;
  r.closed = c0.divX_closed;
  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    double flux[2];
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd y = x;
      y[i] += (k == 0 ? h : -h);
      const ConformalSample c = lift(field.sample(y));
      flux[k] = std::pow(1.0 - c.f, n) * c.X[i];
    }
    div += (flux[0] - flux[1]) / (2.0 * h);
  }
  r.fd = div / std::pow(1.0 - c0.f, n);
  return r;
}

EllipticForm elliptic_R_form(const PotentialField& field, const Eigen::VectorXd& x, double h) {
  const FieldSample s0 = field.sample(x);
  if (s0.distance_to_boundary < 6.0 * h)
    throw Error(ErrorKind::Clearance, "elliptic stencil needs 6h clearance from the boundary");
  const ConformalSample c0 = lift(s0);
  const int n = c0.n;
  const double k = n * (n - 1.0);
  double lap = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd yp = x;
    Eigen::VectorXd ym = x;
    yp[i] += h;
    ym[i] -= h;
    const Eigen::VectorXd gp = grad_P(field.sample(yp));
    const Eigen::VectorXd gm = grad_P(field.sample(ym));
    lap += k * (gp[i] - gm[i]) / (2.0 * h);
  }
  const double one_m = 1.0 - c0.f;
  const Eigen::VectorXd gradR = k * c0.grad_P_euclidean;
  const Eigen::VectorXd Dphi = -c0.grad_f_euclidean / one_m;
  EllipticForm e;
  e.laplacian_g_R = (lap + (n - 2.0) * Dphi.dot(gradR)) / (one_m * one_m);
  e.drift = (n - 2.0) * c0.grad_f_euclidean.dot(gradR) / (one_m * one_m * (1.0 + c0.f));
  return e;
}

LevelCurvature level_mean_curvature_g(const ConformalSample& cs) {
  const double one_m = 1.0 - cs.f;
  const Eigen::VectorXd& Df = cs.grad_f_euclidean;
  const double ng = std::sqrt(cs.norm_grad_f_g_sq);
  const double gu = cs.base.Du.norm();
  if (!(ng > 0.0) || !(gu > 0.0)) throw Error(ErrorKind::UndefinedNormal, "critical point of u");
  LevelCurvature k;
  const double hff = Df.dot(cs.nabla2_f * Df) / std::pow(one_m, 4);
  k.H_g = cs.laplacian_g_f / ng - hff / (ng * ng * ng);
  k.H_euclidean = cs.base.Du.dot(cs.base.D2u * cs.base.Du) / (gu * gu * gu);
  return k;
}

double proportionality_residual(const ConformalSample& cs) {
  const double one_m = 1.0 - cs.f;
  const Eigen::MatrixXd m = cs.nabla2_f / (one_m * one_m) -
                            cs.laplacian_g_f / cs.n * Eigen::MatrixXd::Identity(cs.n, cs.n);
  return m.cwiseAbs().maxCoeff();
}

}  // namespace capax
