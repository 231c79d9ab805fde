#include "panel_quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "capax/errors.hpp"
#include "capax/quadrature.hpp"

namespace capax::detail {

namespace {

using Ref = Eigen::Vector2d;

void emit_rule(const SurfaceMesh& mesh, std::size_t j, const Ref& a, const Ref& b, const Ref& c,
               std::vector<QuadNode>& out) {
  const double det = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  for (const auto& q : quadrature::triangle7()) {
    const Ref r = a + q.xi * (b - a) + q.eta * (c - a);
    const SurfacePoint sp = mesh.map(j, r.x(), r.y());
    out.push_back({sp.position, 0.5 * q.weight * det * sp.jacobian});
  }
}

void refine(const SurfaceMesh& mesh, std::size_t j, const Eigen::Vector3d& x, const Ref& a,
            const Ref& b, const Ref& c, const NearFieldRule& rule, int depth,
            std::vector<QuadNode>& out) {
  const Eigen::Vector3d pa = mesh.map(j, a.x(), a.y()).position;
  const Eigen::Vector3d pb = mesh.map(j, b.x(), b.y()).position;
  const Eigen::Vector3d pc = mesh.map(j, c.x(), c.y()).position;
  const double size = std::max({(pa - pb).norm(), (pb - pc).norm(), (pc - pa).norm()});
  const Ref m = (a + b + c) / 3.0;
  const double dist = (x - mesh.map(j, m.x(), m.y()).position).norm();
  if (dist >= rule.eta * size) {
    emit_rule(mesh, j, a, b, c, out);
    return;
  }
  if (depth >= rule.max_depth)
    throw Error(ErrorKind::Quadrature, "near-singular panel integral not resolved at maximum depth");
  const Ref ab = 0.5 * (a + b);
  const Ref bc = 0.5 * (b + c);
  const Ref ca = 0.5 * (c + a);
  refine(mesh, j, x, a, ab, ca, rule, depth + 1, out);
  refine(mesh, j, x, ab, b, bc, rule, depth + 1, out);
  refine(mesh, j, x, ca, bc, c, rule, depth + 1, out);
  refine(mesh, j, x, ab, bc, ca, rule, depth + 1, out);
}

}  // namespace

void adaptive_nodes(const SurfaceMesh& mesh, std::size_t j, const Eigen::Vector3d& x,
                    const NearFieldRule& rule, std::vector<QuadNode>& out) {
  refine(mesh, j, x, Ref(0, 0), Ref(1, 0), Ref(0, 1), rule, 0, out);
}

void singular_nodes(const SurfaceMesh& mesh, std::size_t j, double xi, double eta,
                    const NearFieldRule& rule, std::vector<QuadNode>& out) {
  const Ref p(xi, eta);
  const std::array<Ref, 3> v{Ref(0, 0), Ref(1, 0), Ref(0, 1)};
  const auto& gl = quadrature::gauss_legendre(rule.self_order);
  for (int k = 0; k < 3; ++k) {
    const Ref a = v[k];
    const Ref b = v[(k + 1) % 3];
    const Ref e1 = a - p;
    const Ref e2 = b - a;
    const double det = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    for (std::size_t is = 0; is < gl.nodes.size(); ++is) {
      const double s = gl.nodes[is];
      for (std::size_t it = 0; it < gl.nodes.size(); ++it) {
        const double t = gl.nodes[it];
        const Ref r = p + s * e1 + s * t * e2;
        const SurfacePoint sp = mesh.map(j, r.x(), r.y());
        out.push_back({sp.position, gl.weights[is] * gl.weights[it] * s * det * sp.jacobian});
      }
    }
  }
}

}  // namespace capax::detail
