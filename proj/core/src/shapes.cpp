#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "capax/errors.hpp"
#include "capax/geometry.hpp"

namespace capax {

namespace {

// Coefficients of d^m P_l / dz^m in the monomial basis.
std::vector<double> legendre_derivative(int l, int m) {
  std::vector<double> p0{1.0};
  std::vector<double> p1{0.0, 1.0};
  std::vector<double> p = l == 0 ? p0 : p1;
  for (int k = 2; k <= l; ++k) {
    std::vector<double> next(k + 1, 0.0);
    for (int i = 0; i < static_cast<int>(p1.size()); ++i)
      next[i + 1] += (2.0 * k - 1.0) * p1[i] / k;
    for (int i = 0; i < static_cast<int>(p0.size()); ++i) next[i] -= (k - 1.0) * p0[i] / k;
    p0 = std::move(p1);
    p1 = next;
    p = std::move(next);
  }
  for (int d = 0; d < m; ++d) {
    if (p.size() <= 1) return {0.0};
    std::vector<double> dp(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = static_cast<double>(i) * p[i];
    p = std::move(dp);
  }
  return p;
}

double sh_norm(int l, int m) {
  const int am = std::abs(m);
  double ratio = 1.0;
  for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
  double n = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
  if (m != 0) n *= std::numbers::sqrt2;
  return n;
}

struct HarmonicTerm {
  int order = 0;
  double scale = 0.0;  // amplitude times normalization
  std::vector<double> poly;
};

HarmonicTerm make_term(int l, int m, double amplitude) {
  return {m, amplitude * sh_norm(l, m), legendre_derivative(l, std::abs(m))};
}

struct Dual {
  double v = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  Dual(double value, const Eigen::Vector3d& grad) : v(value), g(grad) {}
};
inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.g + b.g}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.g - b.g}; }
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.g + b.v * a.g}; }
inline Dual operator*(double s, const Dual& a) { return {s * a.v, s * a.g}; }

template <class T>
T sh_eval(const HarmonicTerm& h, const T& x, const T& y, const T& z) {
  const auto& c = h.poly;
  T poly(0.0);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) poly = poly * z + T(c[k]);
  T re(1.0);
  T im(0.0);
  for (int k = 0; k < std::abs(h.order); ++k) {
    T nre = re * x - im * y;
    T nim = re * y + im * x;
    re = nre;
    im = nim;
  }
  const T angular = h.order >= 0 ? re : im;
  return h.scale * (poly * angular);
}

Jet position_component(const Eigen::Vector3d& x, int i) { return Jet::variable(x[i], i); }

class BallShape final : public Shape {
 public:
  explicit BallShape(double r) : r_(r) {}
  double radius(const Eigen::Vector3d&) const override { return r_; }
  double implicit(const Eigen::Vector3d& x) const override {
    return (x.squaredNorm() - r_ * r_) / (2.0 * r_);
  }
  Jet implicit_jet(const Eigen::Vector3d& x) const override {
    Jet j;
    j.v = implicit(x);
    j.g = x / r_;
    j.h = Eigen::Matrix3d::Identity() / r_;
    return j;
  }
  Jet radial_jet(const Eigen::Vector3d&) const override { return Jet(r_); }
  double circumradius() const override { return r_; }
  Eigen::Vector3d normal(const Eigen::Vector3d& x) const override { return x.normalized(); }

 private:
  double r_;
};

class EllipsoidShape final : public Shape {
 public:
  explicit EllipsoidShape(const Ellipsoid& e) : inv2_(1.0 / (e.a * e.a), 1.0 / (e.b * e.b), 1.0 / (e.c * e.c)),
        rmax_(std::max({e.a, e.b, e.c})) {}
  double radius(const Eigen::Vector3d& d) const override {
    return 1.0 / std::sqrt(d.cwiseProduct(d).dot(inv2_) / d.squaredNorm());
  }
  double implicit(const Eigen::Vector3d& x) const override {
    return 0.5 * (x.cwiseProduct(x).dot(inv2_) - 1.0);
  }
  Jet implicit_jet(const Eigen::Vector3d& x) const override {
    Jet j;
    j.v = implicit(x);
    j.g = x.cwiseProduct(inv2_);
    j.h = inv2_.asDiagonal();
    return j;
  }
  Jet radial_jet(const Eigen::Vector3d& x) const override {
    Jet q;
    q.v = x.cwiseProduct(x).dot(inv2_);
    q.g = 2.0 * x.cwiseProduct(inv2_);
    q.h = 2.0 * Eigen::Matrix3d(inv2_.asDiagonal());
    Jet r2;
    r2.v = x.squaredNorm();
    r2.g = 2.0 * x;
    r2.h = 2.0 * Eigen::Matrix3d::Identity();
    return sqrt(r2 / q);
  }
  double circumradius() const override { return rmax_; }
  Eigen::Vector3d normal(const Eigen::Vector3d& x) const override {
    return x.cwiseProduct(inv2_).normalized();
  }

 private:
  Eigen::Vector3d inv2_;
  double rmax_;
};

class PerturbedShape final : public Shape {
 public:
  explicit PerturbedShape(const PerturbedSphere& p) : base_(p.base_radius) {
    double bound = 0.0;
    for (const auto& h : p.harmonics) {
      terms_.push_back(make_term(h.degree, h.order, h.amplitude));
      bound += std::abs(terms_.back().scale) * sup_bound(terms_.back());
    }
    rmax_ = base_ * (1.0 + bound);
  }
  double radius(const Eigen::Vector3d& d) const override {
    const Eigen::Vector3d w = d.normalized();
    double s = 1.0;
    for (const auto& h : terms_) s += sh_eval<double>(h, w.x(), w.y(), w.z());
    return base_ * s;
  }
  double implicit(const Eigen::Vector3d& x) const override { return x.norm() - radius(x); }
  Jet implicit_jet(const Eigen::Vector3d& x) const override {
    const double r = x.norm();
    Jet rho;
    rho.v = r;
    rho.g = x / r;
    rho.h = (Eigen::Matrix3d::Identity() - x * x.transpose() / (r * r)) / r;
    return rho - radial_jet(x);
  }
  Jet radial_jet(const Eigen::Vector3d& x) const override {
    const double r = x.norm();
    Jet inv;
    inv.v = 1.0 / r;
    inv.g = -x / (r * r * r);
    inv.h = (3.0 * x * x.transpose() / (r * r) - Eigen::Matrix3d::Identity()) / (r * r * r);
    const Jet wx = position_component(x, 0) * inv;
    const Jet wy = position_component(x, 1) * inv;
    const Jet wz = position_component(x, 2) * inv;
    Jet s(1.0);
    for (const auto& h : terms_) s += sh_eval<Jet>(h, wx, wy, wz);
    return base_ * s;
  }
  double circumradius() const override { return rmax_; }

  Eigen::Vector3d normal(const Eigen::Vector3d& x) const override {
    const double r = x.norm();
    const Eigen::Vector3d w = x / r;
    const Dual wx(w.x(), Eigen::Vector3d::UnitX());
    const Dual wy(w.y(), Eigen::Vector3d::UnitY());
    const Dual wz(w.z(), Eigen::Vector3d::UnitZ());
    Eigen::Vector3d dy = Eigen::Vector3d::Zero();
    for (const auto& h : terms_) dy += sh_eval<Dual>(h, wx, wy, wz).g;
    // gradient of |x| - R(x/|x|)
    const Eigen::Vector3d g = w - base_ * (dy - w * w.dot(dy)) / r;
    const double n = g.norm();
    if (!(n > 0.0)) throw Error(ErrorKind::UndefinedNormal, "implicit gradient vanishes");
    return g / n;
  }

 private:
  // Crude sup bound of |d^m P_l(z)| * |(x+iy)^m| on the sphere: sum of |coefficients|.
  static double sup_bound(const HarmonicTerm& h) {
    double s = 0.0;
    for (double c : h.poly) s += std::abs(c);
    return s;
  }

  double base_;
  std::vector<HarmonicTerm> terms_;
  double rmax_;
};

}  // namespace

double real_spherical_harmonic(int degree, int order, const Eigen::Vector3d& dir) {
  if (degree < 0 || std::abs(order) > degree)
    throw Error(ErrorKind::InvalidDomain, "harmonic needs 0 <= |m| <= l");
  const Eigen::Vector3d w = dir.normalized();
  return sh_eval<double>(make_term(degree, order, 1.0), w.x(), w.y(), w.z());
}

Eigen::Vector3d Shape::normal(const Eigen::Vector3d& x) const {
  const Jet j = implicit_jet(x);
  const double n = j.g.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::UndefinedNormal, "implicit gradient vanishes");
  return j.g / n;
}

SurfaceFrame Shape::frame(const Eigen::Vector3d& x) const {
  const Jet j = implicit_jet(x);
  const double gn = j.g.norm();
  if (!(gn > 0.0)) throw Error(ErrorKind::UndefinedNormal, "implicit gradient vanishes");
  SurfaceFrame fr;
  fr.normal = j.g / gn;
  fr.mean_curvature = (gn * gn * j.h.trace() - j.g.dot(j.h * j.g)) / (gn * gn * gn);
  return fr;
}

std::shared_ptr<const Shape> make_shape(const DomainSpec& spec) {
  validate(spec);
  return std::visit(
      [](const auto& k) -> std::shared_ptr<const Shape> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) return std::make_shared<BallShape>(k.radius);
        else if constexpr (std::is_same_v<K, Ellipsoid>) return std::make_shared<EllipsoidShape>(k);
        else return std::make_shared<PerturbedShape>(k);
      },
      spec.kind);
}

}  // namespace capax
