#include "capax/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capax/errors.hpp"
#include "capax/sampling.hpp"
#include "panel_quadrature.hpp"

namespace capax {

namespace {

struct Accum {
  double u = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
};

inline void add_point(Accum& a, const Eigen::Vector3d& x, const Eigen::Vector3d& y, double q, int order) {
  const Eigen::Vector3d r = x - y;
  const double r2 = r.squaredNorm();
  const double inv = 1.0 / std::sqrt(r2);
  const double inv3 = inv * inv * inv;
  a.u += q * inv;
  if (order >= 1) a.g -= q * inv3 * r;
  if (order >= 2) a.h += q * inv3 * (3.0 * inv * inv * (r * r.transpose()) - Eigen::Matrix3d::Identity());
}

}  // namespace

BemField::BemField(BemSolution sol, double contract_ratio) : sol_(std::move(sol)), contract_ratio_(contract_ratio) {
  const SurfaceMesh& m = *sol_.mesh;
  const std::size_t n = m.size() * SurfaceMesh::kNodesPerPanel;
  nx_.resize(n);
  ny_.resize(n);
  nz_.resize(n);
  nq_.resize(n);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
      const std::size_t q = i * SurfaceMesh::kNodesPerPanel + k;
      nx_[q] = m.node(i, k).x();
      ny_[q] = m.node(i, k).y();
      nz_[q] = m.node(i, k).z();
      nq_[q] = sol_.sigma[i] * m.node_weight(i, k);
    }
  for (const auto& v : m.vertices()) circumradius_ = std::max(circumradius_, v.norm());
}

std::pair<double, double> BemField::clearance(const Eigen::Vector3d& x) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t panel = 0;
  for (std::size_t q = 0; q < nx_.size(); ++q) {
    const double dx = x.x() - nx_[q];
    const double dy = x.y() - ny_[q];
    const double dz = x.z() - nz_[q];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < best) {
      best = d2;
      panel = q / SurfaceMesh::kNodesPerPanel;
    }
  }
  return {std::sqrt(best), mesh().diameter(panel)};
}

bool BemField::in_contract(const Eigen::VectorXd& x) const {
  if (x.size() != 3) return false;
  const Eigen::Vector3d p = x;
  if (!mesh().is_exterior(p)) return false;
  const auto [d, diam] = clearance(p);
  return d >= contract_ratio_ * diam;
}

double BemField::boundary_radius(const Eigen::VectorXd& dir) const {
  return mesh().boundary_radius(Eigen::Vector3d(dir));
}

Eigen::VectorXd BemField::center() const { return mesh().center(); }

FieldSample BemField::evaluate_impl(const Eigen::Vector3d& x, int order) const {
  const SurfaceMesh& m = mesh();
  if (!m.is_exterior(x)) throw Error(ErrorKind::OutOfContract, "evaluation point is not exterior");
  const auto [dist, diam] = clearance(x);
  if (dist < contract_ratio_ * diam)
    throw Error(ErrorKind::OutOfContract, "evaluation point inside the boundary exclusion shell");

  const detail::NearFieldRule rule{sol_.options.near_ratio, sol_.options.max_depth, sol_.options.self_order};
  Accum far;
  Accum near;
  std::vector<detail::QuadNode> scratch;
  const std::size_t np = m.size();
  for (std::size_t j = 0; j < np; ++j) {
    if (detail::is_near(m, j, x, rule.eta)) {
      scratch.clear();
      detail::adaptive_nodes(m, j, x, rule, scratch);
      for (const auto& q : scratch) add_point(near, x, q.y, sol_.sigma[j] * q.w, order);
      continue;
    }
    const std::size_t base = j * SurfaceMesh::kNodesPerPanel;
    double u = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
    double hxx = 0.0, hyy = 0.0, hzz = 0.0, hxy = 0.0, hxz = 0.0, hyz = 0.0;
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
      const std::size_t q = base + k;
      const double dx = x.x() - nx_[q];
      const double dy = x.y() - ny_[q];
      const double dz = x.z() - nz_[q];
      const double r2 = dx * dx + dy * dy + dz * dz;
      const double inv = 1.0 / std::sqrt(r2);
      const double w1 = nq_[q] * inv;
      u += w1;
      if (order >= 1) {
        const double w3 = w1 * inv * inv;
        gx -= w3 * dx;
        gy -= w3 * dy;
        gz -= w3 * dz;
        if (order >= 2) {
          const double w5 = 3.0 * w3 * inv * inv;
          hxx += w5 * dx * dx - w3;
          hyy += w5 * dy * dy - w3;
          hzz += w5 * dz * dz - w3;
          hxy += w5 * dx * dy;
          hxz += w5 * dx * dz;
          hyz += w5 * dy * dz;
        }
      }
    }
    far.u += u;
    far.g += Eigen::Vector3d(gx, gy, gz);
    far.h(0, 0) += hxx;
    far.h(1, 1) += hyy;
    far.h(2, 2) += hzz;
    far.h(0, 1) += hxy;
    far.h(0, 2) += hxz;
    far.h(1, 2) += hyz;
  }
  far.h(1, 0) = far.h(0, 1);
  far.h(2, 0) = far.h(0, 2);
  far.h(2, 1) = far.h(1, 2);

  FieldSample s;
  s.x = x;
  s.n = 3;
  s.distance_to_boundary = dist;
  s.u = far.u + near.u;
  if (order >= 1) s.Du = far.g + near.g;
  if (order >= 2) s.D2u = far.h + near.h;
  return s;
}

FieldSample BemField::sample(const Eigen::VectorXd& x) const {
  if (x.size() != 3) throw Error(ErrorKind::UnsupportedDimension, "BEM fields live in n = 3");
  return evaluate_impl(x, 2);
}

FieldSample BemField::value_grad(const Eigen::VectorXd& x) const {
  if (x.size() != 3) throw Error(ErrorKind::UnsupportedDimension, "BEM fields live in n = 3");
  return evaluate_impl(x, 1);
}

FieldSample evaluate(const BemSolution& sol, const Eigen::Vector3d& x) {
  return BemField(sol).sample(x);
}

std::vector<AsymptoticsRow> asymptotics_check(const PotentialField& field, const std::vector<double>& radii,
                                              std::size_t directions) {
  const int n = field.dimension();
  const double rc = field.circumradius();
  std::vector<Eigen::VectorXd> dirs;
  if (n == 3) {
    for (const auto& d : fibonacci_sphere(directions)) dirs.emplace_back(Eigen::VectorXd(d));
  } else {
    for (int i = 0; i < n; ++i)
      for (double s : {-1.0, 1.0}) dirs.push_back(s * Eigen::VectorXd::Unit(n, i));
  }
  const double cap = field.capacity();
  const Eigen::VectorXd c = field.center();
  std::vector<AsymptoticsRow> rows;
  for (double radius : radii) {
    if (radius < 5.0 * rc)
      throw Error(ErrorKind::OutOfContract, "asymptotic radius below 5 circumradii");
    AsymptoticsRow row;
    row.radius = radius;
    std::vector<AsymptoticsRow> per(dirs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const Eigen::VectorXd x = c + radius * dirs[k];
      const FieldSample s = field.sample(x);
      const double r = x.norm();
      const double u0 = cap * std::pow(r, 2.0 - n);
      const Eigen::VectorXd g0 = -(n - 2.0) * cap * std::pow(r, -n) * x;
      const Eigen::MatrixXd h0 = -(n - 2.0) * cap * std::pow(r, -n) *
                                 (Eigen::MatrixXd::Identity(n, n) - n * x * x.transpose() / (r * r));
      per[k].u_residual = std::abs(s.u / u0 - 1.0);
      per[k].grad_residual = (s.Du - g0).norm() / ((n - 2.0) * cap * std::pow(r, 1.0 - n));
      per[k].hess_residual = (s.D2u - h0).norm() / h0.norm();
    }
    for (const auto& p : per) {
      row.u_residual = std::max(row.u_residual, p.u_residual);
      row.grad_residual = std::max(row.grad_residual, p.grad_residual);
      row.hess_residual = std::max(row.hess_residual, p.hess_residual);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace capax
