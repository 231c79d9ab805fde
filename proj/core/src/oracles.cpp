#include "capax/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "capax/errors.hpp"

namespace capax {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// int_lambda^inf dxi / sqrt(prod(a_i^2 + xi)), via xi = lambda + L^2 tan^2(theta).
double elliptic_tail(const Eigen::Vector3d& a2, double lambda) {
  const Eigen::Vector3d s = (a2.array() + lambda).matrix();
  const double l2 = std::cbrt(s.prod());
  auto f = [&](double th) {
    const double t = std::tan(th);
    const double c = std::cos(th);
    const double xi = l2 * t * t;
    const double p = (s.x() + xi) * (s.y() + xi) * (s.z() + xi);
    return 2.0 * l2 * t / (c * c) / std::sqrt(p);
  };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, kHalfPi, 12, 1e-14);
}

double ellipsoid_mean_curvature(double a, double b, double c, const Eigen::Vector3d& x) {
  const Eigen::Vector3d inv2(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
  const Eigen::Vector3d p = x.cwiseProduct(inv2);
  const double pn = p.norm();
  return (p.squaredNorm() * inv2.sum() - p.cwiseProduct(p).dot(inv2)) / (pn * pn * pn);
}

}  // namespace

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

BallField::BallField(double radius, int n) : rho_(radius), n_(n) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidDomain, "ball radius must be positive");
  if (n < 3) throw Error(ErrorKind::UnsupportedDimension, "dimension must be at least 3");
}

double BallField::capacity() const { return std::pow(rho_, n_ - 2); }

FieldSample BallField::sample(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw Error(ErrorKind::UnsupportedDimension, "point dimension mismatch");
  const double r = x.norm();
  if (r < rho_) throw Error(ErrorKind::OutOfContract, "point inside the ball");
  FieldSample s;
  s.x = x;
  s.n = n_;
  s.distance_to_boundary = r - rho_;
  s.u = std::pow(rho_ / r, n_ - 2);
  const double k = (n_ - 2.0) * s.u / (r * r);
  s.Du = -k * x;
  s.D2u = -k * (Eigen::MatrixXd::Identity(n_, n_) - n_ * x * x.transpose() / (r * r));
  return s;
}

FieldSample ball_field(double radius, int n, const Eigen::VectorXd& x) { return BallField(radius, n).sample(x); }

double ellipsoid_capacity(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw Error(ErrorKind::InvalidDomain, "semi-axes must be positive");
  return 2.0 / elliptic_tail(Eigen::Vector3d(a * a, b * b, c * c), 0.0);
}

double prolate_capacity(double a, double b) {
  if (!(a > b && b > 0.0)) throw Error(ErrorKind::InvalidDomain, "prolate spheroid needs a > b > 0");
  const double e = std::sqrt(a * a - b * b);
  return 2.0 * e / std::log((a + e) / (a - e));
}

CurvatureExtremes ellipsoid_curvature_extremes(double a, double b, double c) {
  auto h = [&](double th, double ph) {
    const Eigen::Vector3d x(a * std::sin(th) * std::cos(ph), b * std::sin(th) * std::sin(ph), c * std::cos(th));
    return ellipsoid_mean_curvature(a, b, c, x);
  };
  auto search = [&](double sign) {
    const int nt = 361;
    const int np = 720;
    double best = -std::numeric_limits<double>::infinity();
    double bt = 0.0;
    double bp = 0.0;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < np; ++j) {
        const double th = std::numbers::pi * i / (nt - 1);
        const double ph = 2.0 * std::numbers::pi * j / np;
        const double v = sign * h(th, ph);
        if (v > best) best = v, bt = th, bp = ph;
      }
    double dt = std::numbers::pi / (nt - 1);
    double dp = 2.0 * std::numbers::pi / np;
    for (int pass = 0; pass < 12; ++pass) {
      const double ct = bt;
      const double cp = bp;
      for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
          const double th = std::clamp(ct + 0.2 * i * dt, 0.0, std::numbers::pi);
          const double ph = cp + 0.2 * j * dp;
          const double v = sign * h(th, ph);
          if (v > best) best = v, bt = th, bp = ph;
        }
      dt *= 0.2;
      dp *= 0.2;
    }
    return sign * best;
  };
  return {search(1.0), search(-1.0)};
}

EllipsoidField::EllipsoidField(double a, double b, double c)
    : a2_(a * a, b * b, c * c), cap_(ellipsoid_capacity(a, b, c)) {}

bool EllipsoidField::in_contract(const Eigen::VectorXd& x) const {
  return x.size() == 3 && x.cwiseProduct(x).dot(a2_.cwiseInverse()) >= 1.0;
}

double EllipsoidField::boundary_radius(const Eigen::VectorXd& dir) const {
  return 1.0 / std::sqrt(dir.cwiseProduct(dir).dot(a2_.cwiseInverse()) / dir.squaredNorm());
}

double EllipsoidField::lambda(const Eigen::Vector3d& x) const {
  const Eigen::Vector3d x2 = x.cwiseProduct(x);
  if (x2.dot(a2_.cwiseInverse()) <= 1.0) return 0.0;
  auto f = [&](double l) {
    const Eigen::Vector3d d = (a2_.array() + l).matrix();
    const double v = x2.cwiseQuotient(d).sum() - 1.0;
    const double dv = -x2.cwiseQuotient(d.cwiseProduct(d)).sum();
    return std::make_pair(v, dv);
  };
  const double hi = x2.sum();
  std::uintmax_t iters = 200;
  return boost::math::tools::newton_raphson_iterate(f, 0.5 * hi, 0.0, hi, 52, iters);
}

double EllipsoidField::tail_integral(double l) const { return elliptic_tail(a2_, l); }

FieldSample EllipsoidField::sample(const Eigen::VectorXd& xin) const {
  if (!in_contract(xin)) throw Error(ErrorKind::OutOfContract, "point inside the ellipsoid");
  const Eigen::Vector3d x = xin;
  const double l = lambda(x);
  const Eigen::Vector3d d = (a2_.array() + l).matrix();
  const Eigen::Vector3d q = x.cwiseQuotient(d);
  const double S = q.squaredNorm();
  const double T = q.cwiseProduct(q).cwiseQuotient(d).sum();
  const Eigen::Vector3d gl = 2.0 * q / S;
  const Eigen::Vector3d dS = 2.0 * q.cwiseQuotient(d) - 2.0 * T * gl;
  Eigen::Matrix3d hl = Eigen::Matrix3d(2.0 * d.cwiseInverse().asDiagonal()) / S;
  hl -= 2.0 * q.cwiseQuotient(d) * gl.transpose() / S;
  hl -= 2.0 * q * dS.transpose() / (S * S);
  hl = 0.5 * (hl + hl.transpose()).eval();

  const double g = 1.0 / std::sqrt(d.prod());
  const double dg = -0.5 * g * d.cwiseInverse().sum();
  FieldSample s;
  s.x = x;
  s.n = 3;
  s.u = 0.5 * cap_ * tail_integral(l);
  s.Du = -0.5 * cap_ * g * gl;
  s.D2u = -0.5 * cap_ * (dg * gl * gl.transpose() + g * hl);
  const double r = boundary_radius(x);
  s.distance_to_boundary = x.norm() - r;
  return s;
}

}  // namespace capax
