#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <capax/errors.hpp>
#include <capax/geometry.hpp>

#include "support/fixtures.hpp"

using namespace capax;
using capax::testing::ball_spec;
using capax::testing::ellipsoid_spec;
using capax::testing::perturbed_spec;

namespace {

constexpr double kPi = std::numbers::pi;

double max_h(const SurfaceMesh& m) {
  double h = -1e300;
  for (double v : m.mean_curvatures()) h = std::max(h, v);
  return h;
}

// Prolate spheroid, axis along x: principal curvatures at the tip are both a / b^2.
double spheroid_tip_h(double a, double b) { return 2.0 * a / (b * b); }

// Surface area of a prolate spheroid a > b = c.
double prolate_area(double a, double b) {
  const double e = std::sqrt(1.0 - b * b / (a * a));
  return 2.0 * kPi * b * b * (1.0 + a / (b * e) * std::asin(e));
}

Eigen::Vector3d polar(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Support function min of an ellipsoid by brute force over surface points.
double support_sweep(double a, double b, double c) {
  double best = 1e300;
  const int nt = 400;
  for (int i = 0; i <= nt; ++i) {
    const double th = kPi * i / nt;
    for (int j = 0; j < 2 * nt; ++j) {
      const double ph = kPi * j / nt;
      const Eigen::Vector3d x(a * std::sin(th) * std::cos(ph), b * std::sin(th) * std::sin(ph), c * std::cos(th));
      const Eigen::Vector3d g(x.x() / (a * a), x.y() / (b * b), x.z() / (c * c));
      best = std::min(best, x.dot(g.normalized()));
    }
  }
  return best;
}

}  // namespace

TEST(SurfaceGeometry, UnitBallLevel3PanelsCurvatureArea) {
  const SurfaceMesh m = build_mesh(ball_spec(), 3);
  EXPECT_EQ(m.size(), 1280u);
  for (double h : m.mean_curvatures()) EXPECT_NEAR(h, 2.0, 1e-12);
  EXPECT_NEAR(m.total_area(), 4.0 * kPi, 0.002 * 4.0 * kPi);
}

TEST(SurfaceGeometry, PanelCountIsTwentyTimesFourToTheLevel) {
  for (int level = 0; level <= 4; ++level)
    EXPECT_EQ(build_mesh(ball_spec(), level).size(), 20u * (1u << (2 * level)));
}

TEST(SurfaceGeometry, EllipsoidTipCurvatureLevel4) {
  const SurfaceMesh m = build_mesh(ellipsoid_spec(), 4);
  EXPECT_NEAR(max_h(m), spheroid_tip_h(2.0, 1.0), 0.005 * 4.0);
}

TEST(SurfaceGeometry, ZeroPerturbationMatchesBall) {
  const SurfaceMesh p = build_mesh(perturbed_spec(0.0), 3);
  const SurfaceMesh b = build_mesh(ball_spec(), 3);
  ASSERT_EQ(p.size(), b.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR((p.centroid(i) - b.centroid(i)).norm(), 0.0, 1e-14);
    EXPECT_NEAR(p.area(i), b.area(i), 1e-14);
    EXPECT_NEAR((p.normal(i) - b.normal(i)).norm(), 0.0, 1e-14);
    EXPECT_NEAR(p.mean_curvature(i), b.mean_curvature(i), 1e-12);
  }
}

TEST(SurfaceGeometry, EnclosedVolume) {
  EXPECT_NEAR(enclosed_volume(build_mesh(ball_spec(), 4)), 4.0 * kPi / 3.0, 0.003 * 4.0 * kPi / 3.0);
  EXPECT_NEAR(enclosed_volume(build_mesh(ellipsoid_spec(), 4)), 8.0 * kPi / 3.0, 0.005 * 8.0 * kPi / 3.0);
}

TEST(SurfaceGeometry, DegenerateDomainRejected) {
  EXPECT_THROW(build_mesh(ball_spec(0.0), 2), Error);
  EXPECT_THROW(build_mesh(ellipsoid_spec(2.0, 0.0, 1.0), 2), Error);
  try {
    build_mesh(ball_spec(-1.0), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDomain);
  }
}

TEST(SurfaceGeometry, NegativeRadialMapRejected) {
  try {
    build_mesh(perturbed_spec(4.0), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDomain);
  }
}

TEST(SurfaceGeometry, OnlyThreeDimensionalMeshes) {
  DomainSpec s = ball_spec();
  s.dimension = 4;
  try {
    build_mesh(s, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDimension);
  }
}

TEST(SurfaceGeometry, Starshapedness) {
  EXPECT_NEAR(starshapedness(build_mesh(ball_spec(), 3)), 1.0, 1e-12);
  EXPECT_NEAR(starshapedness(build_mesh(ellipsoid_spec(), 4)), support_sweep(2.0, 1.0, 1.0), 0.01);
  EXPECT_GT(starshapedness(build_mesh(perturbed_spec(0.05), 3)), 0.0);
}

TEST(SurfaceGeometry, RefinementConvergence) {
  const double ball_area = 4.0 * kPi;
  const double ball_vol = 4.0 * kPi / 3.0;
  const double ell_area = prolate_area(2.0, 1.0);
  const double ell_vol = 8.0 * kPi / 3.0;
  double prev[4] = {0, 0, 0, 0};
  for (int level = 2; level <= 5; ++level) {
    const SurfaceMesh b = build_mesh(ball_spec(), level);
    const SurfaceMesh e = build_mesh(ellipsoid_spec(), level);
    const double err[4] = {std::abs(b.total_area() - ball_area), std::abs(enclosed_volume(b) - ball_vol),
                           std::abs(e.total_area() - ell_area), std::abs(enclosed_volume(e) - ell_vol)};
    if (level > 2)
      for (int k = 0; k < 4; ++k) EXPECT_GE(prev[k] / err[k], 3.0) << "quantity " << k << " level " << level;
    std::copy(err, err + 4, prev);
  }
}

TEST(SurfaceGeometry, MeanCurvatureSignOnBalls) {
  for (double rho : {0.5, 1.0, 2.0}) {
    const SurfaceMesh m = build_mesh(ball_spec(rho), 2);
    for (double h : m.mean_curvatures()) EXPECT_NEAR(h, 2.0 / rho, 1e-12);
  }
}

TEST(SurfaceGeometry, NormalsPointOutward) {
  for (const auto& spec : {ball_spec(), ellipsoid_spec(), perturbed_spec(0.1, 3, 1)}) {
    const SurfaceMesh m = build_mesh(spec, 3);
    for (std::size_t i = 0; i < m.size(); ++i) {
      EXPECT_GT(m.normal(i).dot(m.centroid(i) - m.center()), 0.0);
      EXPECT_NEAR(m.normal(i).norm(), 1.0, 1e-14);
    }
  }
}

// <nu, dX/dtheta> = 0 with X(theta, phi) = r(w) w; derivatives by Richardson-extrapolated differences.
TEST(SurfaceGeometry, GaussMapOrthogonalToAnalyticTangents) {
  for (const auto& spec : {ellipsoid_spec(1.5, 1.0, 0.75), perturbed_spec(0.08, 3, -2)}) {
    const SurfaceMesh m = build_mesh(spec, 2);
    const Shape& shape = m.shape();
    auto X = [&](double th, double ph) {
      const Eigen::Vector3d w = polar(th, ph);
      return Eigen::Vector3d(shape.radius(w) * w);
    };
    for (std::size_t i = 0; i < m.size(); i += 7) {
      const Eigen::Vector3d d = (m.centroid(i) - m.center()).normalized();
      const double th = std::acos(d.z());
      const double ph = std::atan2(d.y(), d.x());
      if (std::sin(th) < 0.05) continue;
      auto diff = [&](int axis, double h) {
        const double dt = axis == 0 ? h : 0.0;
        const double dp = axis == 1 ? h : 0.0;
        return Eigen::Vector3d((X(th + dt, ph + dp) - X(th - dt, ph - dp)) / (2.0 * h));
      };
      for (int axis = 0; axis < 2; ++axis) {
        const double h = 1e-3;
        const Eigen::Vector3d t = (4.0 * diff(axis, h / 2) - diff(axis, h)) / 3.0;
        EXPECT_NEAR(m.normal(i).dot(t), 0.0, 1e-10) << "panel " << i;
      }
    }
  }
}

// Mean curvature equals the divergence of the unit normal field extended off the surface.
TEST(SurfaceGeometry, MeanCurvatureIsDivergenceOfNormal) {
  const DomainSpec spec = perturbed_spec(0.07, 4, 3);
  const auto shape = make_shape(spec);
  const SurfaceMesh m = build_mesh(spec, 2);
  const double h = 1e-5;
  for (std::size_t i = 0; i < m.size(); i += 11) {
    const Eigen::Vector3d x = m.centroid(i) - m.center();
    double div = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d e = Eigen::Vector3d::Unit(k) * h;
      div += (shape->normal(x + e)[k] - shape->normal(x - e)[k]) / (2.0 * h);
    }
    EXPECT_NEAR(m.mean_curvature(i), div, 1e-5);
  }
}

TEST(SurfaceGeometry, TranslationMovesGeometryRigidly) {
  DomainSpec moved = ellipsoid_spec(1.5, 1.0, 0.75);
  moved.center = Eigen::Vector3d(0.3, -2.0, 5.0);
  const SurfaceMesh a = build_mesh(ellipsoid_spec(1.5, 1.0, 0.75), 2);
  const SurfaceMesh b = build_mesh(moved, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR((b.centroid(i) - a.centroid(i) - moved.center).norm(), 0.0, 1e-13);
    EXPECT_NEAR(a.area(i), b.area(i), 1e-15);
    EXPECT_NEAR(a.mean_curvature(i), b.mean_curvature(i), 1e-12);
  }
  EXPECT_NEAR(enclosed_volume(a), enclosed_volume(b), 1e-10);
}

TEST(SurfaceGeometry, NodeWeightsSumToPanelArea) {
  const SurfaceMesh m = build_mesh(perturbed_spec(0.05), 2);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double w = 0.0;
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) w += m.node_weight(i, k);
    EXPECT_NEAR(w, m.area(i), 1e-14);
  }
}

TEST(SphericalHarmonics, LowOrderClosedForms) {
  const Eigen::Vector3d w = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  const double c0 = 1.0 / std::sqrt(4.0 * kPi);
  const double c1 = std::sqrt(3.0 / (4.0 * kPi));
  EXPECT_NEAR(real_spherical_harmonic(0, 0, w), c0, 1e-15);
  EXPECT_NEAR(real_spherical_harmonic(1, 0, w), c1 * w.z(), 1e-15);
  EXPECT_NEAR(real_spherical_harmonic(1, 1, w), c1 * w.x(), 1e-15);
  EXPECT_NEAR(real_spherical_harmonic(1, -1, w), c1 * w.y(), 1e-15);
  EXPECT_NEAR(real_spherical_harmonic(2, 0, w), std::sqrt(5.0 / (16.0 * kPi)) * (3.0 * w.z() * w.z() - 1.0), 1e-14);
  EXPECT_THROW(real_spherical_harmonic(2, 3, w), Error);
}

TEST(SphericalHarmonics, Orthonormal) {
  // Product rule: Gauss-Legendre in cos(theta) from first principles, uniform in phi.
  const int nt = 24;
  const int np = 48;
  std::vector<double> z(nt), wz(nt);
  for (int i = 0; i < nt; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (nt + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= nt; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = nt * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        wz[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        break;
      }
    }
    z[i] = x;
  }
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
  for (std::size_t a = 0; a < lm.size(); ++a) {
    for (std::size_t b = a; b < lm.size(); ++b) {
      double s = 0.0;
      for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
          const double ph = 2.0 * kPi * j / np;
          const double st = std::sqrt(1.0 - z[i] * z[i]);
          const Eigen::Vector3d w(st * std::cos(ph), st * std::sin(ph), z[i]);
          s += wz[i] * (2.0 * kPi / np) * real_spherical_harmonic(lm[a].first, lm[a].second, w) *
               real_spherical_harmonic(lm[b].first, lm[b].second, w);
        }
      }
      EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12) << lm[a].first << lm[a].second << " " << lm[b].first << lm[b].second;
    }
  }
}

TEST(DomainSpecJson, ParsesAllKinds) {
  const DomainSpec b = parse_domain_spec(R"({"kind":"ball","radius":2.5})");
  EXPECT_DOUBLE_EQ(std::get<Ball>(b.kind).radius, 2.5);
  EXPECT_EQ(b.name, "ball");
  const DomainSpec e = parse_domain_spec(R"({"kind":"ellipsoid","a":2,"b":1,"c":0.5,"center":[1,2,3],"name":"e"})");
  EXPECT_DOUBLE_EQ(std::get<Ellipsoid>(e.kind).c, 0.5);
  EXPECT_EQ(e.center, Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(e.name, "e");
  const DomainSpec p = parse_domain_spec(
      R"({"kind":"perturbed_sphere","base_radius":1,"harmonics":[{"l":3,"m":-2,"amplitude":0.1}]})");
  const auto& ps = std::get<PerturbedSphere>(p.kind);
  ASSERT_EQ(ps.harmonics.size(), 1u);
  EXPECT_EQ(ps.harmonics[0].order, -2);
}

TEST(DomainSpecJson, RoundTrip) {
  for (const auto& spec : {ball_spec(3.0), ellipsoid_spec(1.5, 1.0, 0.75), perturbed_spec(0.05, 4, 3)}) {
    const std::string text = domain_spec_to_json(spec);
    EXPECT_EQ(domain_spec_to_json(parse_domain_spec(text)), text);
  }
}

TEST(DomainSpecJson, ErrorKinds) {
  auto kind_of = [](const char* text) {
    try {
      parse_domain_spec(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Solver;
  };
  EXPECT_EQ(kind_of("{\"kind\": \"ball\", "), ErrorKind::Usage);
  EXPECT_EQ(kind_of(R"({"kind":"torus"})"), ErrorKind::InvalidDomain);
  EXPECT_EQ(kind_of(R"({"kind":"ball"})"), ErrorKind::InvalidDomain);
  EXPECT_EQ(kind_of(R"({"kind":"ball","radius":"one"})"), ErrorKind::InvalidDomain);
  EXPECT_EQ(kind_of(R"({"kind":"ellipsoid","a":1,"b":-1,"c":1})"), ErrorKind::InvalidDomain);
}
