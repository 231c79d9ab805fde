#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <capax/errors.hpp>
#include <capax/oracles.hpp>
#include <capax/sampling.hpp>

using namespace capax;

namespace {

constexpr double kPi = std::numbers::pi;

double prolate_cap(double a, double b) {
  const double e = std::sqrt(a * a - b * b);
  return 2.0 * e / std::log((a + e) / (a - e));
}

// 2 / int_0^inf dxi / sqrt(prod(a_i^2 + xi)), xi = tan^2(theta), composite Simpson in theta.
double capacity_simpson(double a, double b, double c) {
  const int n = 20000;
  const double hi = kPi / 2.0;
  auto g = [&](double th) {
    if (th >= hi) return 2.0;  // 2 t sec^2 / t^3 -> 2
    const double t = std::tan(th);
    const double xi = t * t;
    const double dxi = 2.0 * t / (std::cos(th) * std::cos(th));
    return dxi / std::sqrt((a * a + xi) * (b * b + xi) * (c * c + xi));
  };
  double s = g(0.0) + g(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(hi * i / n);
  return 2.0 / (s * hi / (3.0 * n));
}

// Mean curvature (sum of principal curvatures) of x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 at a surface point.
double ellipsoid_h(double a, double b, double c, const Eigen::Vector3d& x) {
  const Eigen::Vector3d g(2 * x.x() / (a * a), 2 * x.y() / (b * b), 2 * x.z() / (c * c));
  const Eigen::Matrix3d H = Eigen::Vector3d(2 / (a * a), 2 / (b * b), 2 / (c * c)).asDiagonal();
  const double gn = g.norm();
  return (gn * gn * H.trace() - g.dot(H * g)) / (gn * gn * gn);
}

}  // namespace

TEST(AnalyticOracles, SphereAreaAndBallVolume) {
  EXPECT_NEAR(sphere_area(3), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2.0 * kPi * kPi, 1e-13);
  EXPECT_NEAR(ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(ball_volume(4), kPi * kPi / 2.0, 1e-14);
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(sphere_area(n), n * ball_volume(n), 1e-12);
}

TEST(AnalyticOracles, BallFieldValues) {
  EXPECT_DOUBLE_EQ(ball_field(1.0, 3, Eigen::Vector3d(2, 0, 0)).u, 0.5);
  Eigen::VectorXd x5 = Eigen::VectorXd::Zero(5);
  x5[0] = 2.0;
  EXPECT_NEAR(ball_field(1.0, 5, x5).u, 0.125, 1e-15);
  EXPECT_DOUBLE_EQ(BallField(2.0, 3).capacity(), 2.0);
  EXPECT_DOUBLE_EQ(BallField(2.0, 4).capacity(), 4.0);
  EXPECT_DOUBLE_EQ(BallField(3.0, 5).capacity(), 27.0);
}

TEST(AnalyticOracles, BallFieldDerivativesByDifferences) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int n : {3, 4, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = N(rng);
      x *= 2.5 / x.norm();
      const FieldSample s = ball_field(1.3, n, x);
      EXPECT_NEAR(s.u, std::pow(1.3 / 2.5, n - 2), 1e-14);
      const double h = 1e-4;
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[k] = h;
        const FieldSample p = ball_field(1.3, n, x + e);
        const FieldSample m = ball_field(1.3, n, x - e);
        EXPECT_NEAR((p.u - m.u) / (2 * h), s.Du[k], 1e-8);
        for (int j = 0; j < n; ++j) EXPECT_NEAR((p.Du[j] - m.Du[j]) / (2 * h), s.D2u(j, k), 1e-7);
      }
      EXPECT_NEAR(s.D2u.trace(), 0.0, 1e-13);
    }
  }
}

TEST(AnalyticOracles, EllipsoidCapacityClosedForms) {
  EXPECT_NEAR(ellipsoid_capacity(1, 1, 1), 1.0, 1e-12);
  EXPECT_NEAR(ellipsoid_capacity(2, 1, 1), std::sqrt(3.0) / std::log(2.0 + std::sqrt(3.0)), 1e-10);
  EXPECT_NEAR(ellipsoid_capacity(2, 1, 1), 1.3151907222, 1e-9);
  EXPECT_NEAR(prolate_capacity(2, 1), prolate_cap(2, 1), 1e-13);
}

TEST(AnalyticOracles, EllipsoidCapacityScaling) {
  for (double lam : {0.3, 2.0, 7.5}) {
    const double base = ellipsoid_capacity(1.5, 1.0, 0.75);
    EXPECT_NEAR(ellipsoid_capacity(lam * 1.5, lam * 1.0, lam * 0.75), lam * base, 1e-10 * lam * base);
  }
}

TEST(AnalyticOracles, ProlateQuadratureAgreesWithClosedForm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  for (int i = 0; i < 10; ++i) {
    const double b = U(rng);
    const double a = b * (1.01 + U(rng));
    EXPECT_NEAR(ellipsoid_capacity(a, b, b), prolate_cap(a, b), 1e-9 * prolate_cap(a, b));
  }
}

TEST(AnalyticOracles, TriaxialCapacityBySimpson) {
  for (const auto& [a, b, c] : {std::tuple{1.5, 1.0, 0.75}, std::tuple{3.0, 0.5, 0.2}, std::tuple{1.0, 1.0, 0.5}}) {
    EXPECT_NEAR(ellipsoid_capacity(a, b, c), capacity_simpson(a, b, c), 1e-8);
  }
  // oblate a = b > c: sqrt(a^2 - c^2) / arccos(c / a)
  EXPECT_NEAR(ellipsoid_capacity(1.0, 1.0, 0.5), std::sqrt(0.75) / std::acos(0.5), 1e-10);
}

TEST(AnalyticOracles, CurvatureExtremes) {
  const auto ball = ellipsoid_curvature_extremes(1, 1, 1);
  EXPECT_NEAR(ball.max_h, 2.0, 1e-12);
  EXPECT_NEAR(ball.min_h, 2.0, 1e-12);
  const auto pro = ellipsoid_curvature_extremes(2, 1, 1);
  EXPECT_NEAR(pro.max_h, 4.0, 1e-9);
  EXPECT_NEAR(pro.min_h, 1.25, 1e-9);
  // brute-force sweep for a triaxial case
  double hmax = 0.0;
  double hmin = 1e300;
  const int n = 600;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < 2 * n; ++j) {
      const double th = kPi * i / n;
      const double ph = kPi * j / n;
      const Eigen::Vector3d x(1.5 * std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), 0.75 * std::cos(th));
      const double h = ellipsoid_h(1.5, 1.0, 0.75, x);
      hmax = std::max(hmax, h);
      hmin = std::min(hmin, h);
    }
  }
  const auto tri = ellipsoid_curvature_extremes(1.5, 1.0, 0.75);
  EXPECT_NEAR(tri.max_h, hmax, 1e-6);
  EXPECT_NEAR(tri.min_h, hmin, 1e-6);
}

TEST(AnalyticOracles, EllipsoidFieldBoundaryAndInfinity) {
  const EllipsoidField f(1.5, 1.0, 0.75);
  EXPECT_NEAR(f.capacity(), ellipsoid_capacity(1.5, 1.0, 0.75), 1e-12);
  for (const Eigen::Vector3d& d : fibonacci_sphere(50)) {
    const double r = f.boundary_radius(d);
    const Eigen::Vector3d on = d * r;
    EXPECT_NEAR(std::pow(on.x() / 1.5, 2) + std::pow(on.y(), 2) + std::pow(on.z() / 0.75, 2), 1.0, 1e-12);
    EXPECT_NEAR(f.lambda(on * (1.0 + 1e-12)), 0.0, 1e-9);
    EXPECT_NEAR(f.sample(on * 1.0000001).u, 1.0, 1e-6);
    EXPECT_NEAR(f.sample(d * 1e4).u * 1e4, f.capacity(), 1e-6);
  }
}

TEST(AnalyticOracles, EllipsoidFieldIsHarmonicAndConsistent) {
  const EllipsoidField f(2.0, 1.0, 0.5);
  for (const Eigen::Vector3d& d : fibonacci_sphere(30)) {
    const Eigen::VectorXd x = d * (1.7 * f.boundary_radius(d));
    const FieldSample s = f.sample(x);
    EXPECT_LT(std::abs(s.D2u.trace()), 1e-10 * s.D2u.norm());
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd e = Eigen::Vector3d::Unit(k) * h;
      const FieldSample p = f.sample(x + e);
      const FieldSample m = f.sample(x - e);
      EXPECT_NEAR((p.u - m.u) / (2 * h), s.Du[k], 1e-8);
      EXPECT_LT(((p.Du - m.Du) / (2 * h) - s.D2u.col(k)).norm(), 1e-7);
    }
    const Eigen::Vector3d y = x;
    const Eigen::Vector3d a2(4.0, 1.0, 0.25);
    const double lam = f.lambda(y);
    EXPECT_NEAR((y.array().square() / (a2.array() + lam)).sum(), 1.0, 1e-12);
  }
}

TEST(AnalyticOracles, EllipsoidFieldContract) {
  const EllipsoidField f(2.0, 1.0, 1.0);
  EXPECT_FALSE(f.in_contract(Eigen::Vector3d(1.0, 0, 0)));
  EXPECT_TRUE(f.in_contract(Eigen::Vector3d(2.5, 0, 0)));
  EXPECT_THROW(f.sample(Eigen::Vector3d(1.0, 0, 0)), Error);
}
