#pragma once

#include <cmath>

#include <Eigen/Core>

namespace capax {

/// Second-order forward-mode jet in three variables: value, gradient and Hessian.
/// Used to differentiate the analytic shape functions exactly.
struct Jet {
  double v = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Jet variable(double value, int index) {
    Jet j(value);
    j.g[index] = 1.0;
    return j;
  }

  /// Composes a scalar function with this jet given phi(v), phi'(v), phi''(v).
  Jet chain(double f0, double f1, double f2) const {
    Jet r;
    r.v = f0;
    r.g = f1 * g;
    r.h = f1 * h + f2 * (g * g.transpose());
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    g += o.g;
    h += o.h;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    g -= o.g;
    h -= o.h;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    h = v * o.h + o.v * h + g * o.g.transpose() + o.g * g.transpose();
    g = v * o.g + o.v * g;
    v *= o.v;
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    g *= s;
    h *= s;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator-(Jet a) { return a *= -1.0; }

inline Jet inverse(const Jet& a) {
  const double r = 1.0 / a.v;
  return a.chain(r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
inline Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
inline Jet operator/(double s, const Jet& a) { return s * inverse(a); }

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}

using std::sqrt;

}  // namespace capax
