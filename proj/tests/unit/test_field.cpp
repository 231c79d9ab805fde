#include <cmath>

#include <gtest/gtest.h>

#include <capax/errors.hpp>
#include <capax/field.hpp>
#include <capax/oracles.hpp>
#include <capax/sampling.hpp>

#include "support/fixtures.hpp"

using namespace capax;
using capax::testing::ball_spec;
using capax::testing::ellipsoid_spec;
using capax::testing::field_of;
using capax::testing::perturbed_spec;
using capax::testing::solved;

namespace {

double prolate_cap(double a, double b) {
  const double e = std::sqrt(a * a - b * b);
  return 2.0 * e / std::log((a + e) / (a - e));
}

Eigen::VectorXd v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

std::vector<Eigen::VectorXd> shell_points(const PotentialField& f, std::size_t n, double lo, double hi) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : exterior_points(n, 3, lo, hi)) {
    const Eigen::Vector3d d = p.normalized();
    out.push_back(f.center() + d * (p.norm() * f.boundary_radius(d)));
  }
  return out;
}

}  // namespace

TEST(FieldEval, UnitBallDerivatives) {
  const auto f = field_of(ball_spec(), 3);
  const FieldSample s = f->sample(v3(3, 0, 0));
  EXPECT_NEAR(s.u, 1.0 / 3.0, 0.005 / 3.0);
  EXPECT_NEAR(s.Du[0], -1.0 / 9.0, 0.005 / 9.0);
  EXPECT_NEAR(s.Du[1], 0.0, 1e-6);
  EXPECT_NEAR(s.Du[2], 0.0, 1e-6);
  EXPECT_NEAR(s.D2u(0, 0), 2.0 / 27.0, 0.005 * 2.0 / 27.0);
  EXPECT_NEAR(s.D2u(1, 1), -1.0 / 27.0, 0.005 / 27.0);
  EXPECT_NEAR(s.D2u(2, 2), -1.0 / 27.0, 0.005 / 27.0);
  EXPECT_NEAR(s.D2u(0, 1), 0.0, 1e-6);
}

TEST(FieldEval, EllipsoidLeadingOrder) {
  const auto f = field_of(ellipsoid_spec(), 3);
  EXPECT_NEAR(f->sample(v3(10, 0, 0)).u, prolate_cap(2.0, 1.0) / 10.0, 0.02 * prolate_cap(2.0, 1.0) / 10.0);
}

TEST(FieldEval, FarFieldMonopole) {
  for (const auto& spec : {ball_spec(), ellipsoid_spec(), perturbed_spec(0.05)}) {
    const auto f = field_of(spec, 3);
    for (const Eigen::Vector3d& d : fibonacci_sphere(12)) {
      const double u = f->sample(1e3 * d).u;
      EXPECT_NEAR(u * 1e3, f->capacity(), 0.005 * f->capacity());
    }
  }
}

TEST(FieldEval, EllipsoidAgainstExactField) {
  const auto f = field_of(ellipsoid_spec(), 4);
  const EllipsoidField exact(2.0, 1.0, 1.0);
  for (const auto& x : shell_points(*f, 40, 1.3, 3.0)) {
    const FieldSample b = f->sample(x);
    const FieldSample e = exact.sample(x);
    EXPECT_NEAR(b.u, e.u, 1e-4 * e.u);
    EXPECT_LT((b.Du - e.Du).norm(), 1e-3 * e.Du.norm());
    EXPECT_LT((b.D2u - e.D2u).norm(), 1e-2 * e.D2u.norm());
  }
}

TEST(FieldEval, Harmonicity) {
  for (const auto& spec : {ball_spec(), ellipsoid_spec(1.5, 1.0, 0.75), perturbed_spec(0.05)}) {
    const auto f = field_of(spec, 3);
    for (const auto& x : shell_points(*f, 30, 1.2, 5.0)) {
      const FieldSample s = f->sample(x);
      EXPECT_LT(std::abs(s.D2u.trace()), 1e-6 * s.D2u.norm()) << x.transpose();
    }
  }
}

TEST(FieldEval, GradientAndHessianByDifferences) {
  const auto f = field_of(ellipsoid_spec(1.5, 1.0, 0.75), 3);
  for (const auto& x : shell_points(*f, 20, 1.5, 4.0)) {
    const FieldSample s = f->sample(x);
    const double h = 1e-3 * x.norm();
    Eigen::Vector3d g;
    Eigen::Matrix3d H;
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd e = Eigen::Vector3d::Unit(k) * h;
      const FieldSample p = f->sample(x + e);
      const FieldSample m = f->sample(x - e);
      g[k] = (p.u - m.u) / (2.0 * h);
      H.col(k) = (p.Du - m.Du) / (2.0 * h);
    }
    EXPECT_LT((g - s.Du).norm(), 1e-4 * s.Du.norm());
    EXPECT_LT((H - s.D2u).norm(), 1e-3 * s.D2u.norm());
  }
}

TEST(FieldEval, ValueGradMatchesSample) {
  const auto f = field_of(perturbed_spec(0.05), 3);
  for (const auto& x : shell_points(*f, 10, 1.2, 3.0)) {
    const FieldSample a = f->sample(x);
    const FieldSample b = f->value_grad(x);
    EXPECT_NEAR(a.u, b.u, 1e-14);
    EXPECT_LT((a.Du - b.Du).norm(), 1e-14);
    const FieldSample c = evaluate(solved(perturbed_spec(0.05), 3), Eigen::Vector3d(x));
    EXPECT_NEAR(a.u, c.u, 1e-14);
  }
}

TEST(FieldEval, MaximumPrinciple) {
  for (const auto& spec : {ellipsoid_spec(), perturbed_spec(0.05)}) {
    const auto f = field_of(spec, 3);
    for (const Eigen::Vector3d& d : fibonacci_sphere(24)) {
      double prev = 1.0;
      for (double r = 1.2; r < 30.0; r *= 1.5) {
        const double u = f->sample(d * (r * f->boundary_radius(d))).u;
        EXPECT_LT(u, prev);
        EXPECT_GT(u, 0.0);
        prev = u;
      }
    }
  }
}

TEST(FieldEval, ContractRejectsNearAndInteriorPoints) {
  const auto f = field_of(ball_spec(), 3);
  auto kind = [&](const Eigen::VectorXd& x) {
    try {
      f->sample(x);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Usage;
  };
  EXPECT_EQ(kind(v3(0.2, 0, 0)), ErrorKind::OutOfContract);
  EXPECT_EQ(kind(v3(1.0001, 0, 0)), ErrorKind::OutOfContract);
  EXPECT_FALSE(f->in_contract(v3(1.0001, 0, 0)));
  EXPECT_TRUE(f->in_contract(v3(1.5, 0, 0)));
}

TEST(FieldEval, AsymptoticsOnBall) {
  const auto f = field_of(ball_spec(), 3);
  for (const auto& row : asymptotics_check(*f, {10.0, 20.0, 40.0})) {
    EXPECT_LE(row.u_residual, 1e-3);
    EXPECT_LE(row.grad_residual, 1e-3);
    EXPECT_LE(row.hess_residual, 1e-3);
  }
}

TEST(FieldEval, AsymptoticsOnEllipsoidDecay) {
  const auto f = field_of(ellipsoid_spec(), 3);
  const auto rows = asymptotics_check(*f, {10.0, 20.0, 40.0});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LE(rows[0].u_residual, 0.05);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].u_residual, rows[i - 1].u_residual);
    EXPECT_LT(rows[i].grad_residual, rows[i - 1].grad_residual);
    EXPECT_LT(rows[i].hess_residual, rows[i - 1].hess_residual);
  }
}

TEST(FieldEval, AsymptoticsRequiresFarRadii) {
  const auto f = field_of(ellipsoid_spec(), 3);
  try {
    asymptotics_check(*f, {9.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfContract);
  }
}
