#include "capax/bem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/IterativeSolvers>

#include "capax/errors.hpp"
#include "panel_quadrature.hpp"

namespace capax::detail {
class CollocationOperator;
}

namespace Eigen::internal {
template <>
struct traits<capax::detail::CollocationOperator> : public traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace capax {

namespace detail {

struct NodeArrays {
  std::vector<double> x, y, z, w;
};

NodeArrays node_arrays(const SurfaceMesh& mesh) {
  NodeArrays a;
  const std::size_t n = mesh.size() * SurfaceMesh::kNodesPerPanel;
  a.x.resize(n);
  a.y.resize(n);
  a.z.resize(n);
  a.w.resize(n);
  for (std::size_t i = 0; i < mesh.size(); ++i)
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
      const std::size_t q = i * SurfaceMesh::kNodesPerPanel + k;
      a.x[q] = mesh.node(i, k).x();
      a.y[q] = mesh.node(i, k).y();
      a.z[q] = mesh.node(i, k).z();
      a.w[q] = mesh.node_weight(i, k);
    }
  return a;
}

double far_entry(const NodeArrays& a, std::size_t j, const Eigen::Vector3d& x) {
  double s = 0.0;
  for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
    const std::size_t q = j * SurfaceMesh::kNodesPerPanel + k;
    const double dx = x.x() - a.x[q];
    const double dy = x.y() - a.y[q];
    const double dz = x.z() - a.z[q];
    s += a.w[q] / std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return s;
}

double exact_entry(const SurfaceMesh& mesh, std::size_t i, std::size_t j, const NearFieldRule& rule,
                   std::vector<QuadNode>& scratch) {
  scratch.clear();
  if (i == j)
    singular_nodes(mesh, j, 1.0 / 3.0, 1.0 / 3.0, rule, scratch);
  else
    adaptive_nodes(mesh, j, mesh.centroid(i), rule, scratch);
  const Eigen::Vector3d& x = mesh.centroid(i);
  double s = 0.0;
  for (const auto& q : scratch) s += q.w / (x - q.y).norm();
  return s;
}

NearFieldRule rule_from(const BemOptions& o) { return {o.near_ratio, o.max_depth, o.self_order}; }

/// Matrix-free collocation operator scaled on the right by the inverse diagonal.
class CollocationOperator : public Eigen::EigenBase<CollocationOperator> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  CollocationOperator(const SurfaceMesh& mesh, const BemOptions& options) : mesh_(mesh), nodes_(node_arrays(mesh)) {
    const NearFieldRule rule = rule_from(options);
    const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
    std::vector<std::vector<Eigen::Triplet<double>>> rows(mesh.size());
#pragma omp parallel
    {
      std::vector<QuadNode> scratch;
#pragma omp for schedule(dynamic, 16)
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector3d& x = mesh.centroid(i);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (i != j && !is_near(mesh, j, x, rule.eta)) continue;
          const double exact = exact_entry(mesh, i, j, rule, scratch);
          const double far = i == j ? 0.0 : far_entry(nodes_, j, x);
          rows[i].emplace_back(static_cast<int>(i), static_cast<int>(j), exact - far);
        }
      }
    }
    std::vector<Eigen::Triplet<double>> all;
    for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    correction_.resize(n, n);
    correction_.setFromTriplets(all.begin(), all.end());
    inv_diag_ = correction_.diagonal().cwiseInverse();
  }

  Eigen::Index rows() const { return static_cast<Eigen::Index>(mesh_.size()); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<CollocationOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<CollocationOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  /// y = A v with the unscaled collocation matrix.
  Eigen::VectorXd apply_unscaled(const Eigen::VectorXd& v) const {
    const Eigen::Index n = rows();
    Eigen::VectorXd y(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector3d& x = mesh_.centroid(i);
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) s += far_entry(nodes_, j, x) * v[j];
      y[i] = s;
    }
    y += correction_ * v;
    return y;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& z) const { return apply_unscaled(inv_diag_.cwiseProduct(z)); }
  const Eigen::VectorXd& inv_diag() const { return inv_diag_; }

 private:
  const SurfaceMesh& mesh_;
  NodeArrays nodes_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> correction_;
  Eigen::VectorXd inv_diag_;
};

}  // namespace detail
}  // namespace capax

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<capax::detail::CollocationOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<capax::detail::CollocationOperator, Rhs,
                                generic_product_impl<capax::detail::CollocationOperator, Rhs>> {
  using Scalar = typename Product<capax::detail::CollocationOperator, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const capax::detail::CollocationOperator& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    dst += alpha * lhs.apply(Eigen::VectorXd(rhs));
  }
};

}  // namespace Eigen::internal

namespace capax {

Eigen::MatrixXd assemble_matrix(const SurfaceMesh& mesh, const BemOptions& options) {
  const detail::NearFieldRule rule = detail::rule_from(options);
  const detail::NodeArrays nodes = detail::node_arrays(mesh);
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  Eigen::MatrixXd a(n, n);
#pragma omp parallel
  {
    std::vector<detail::QuadNode> scratch;
#pragma omp for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector3d& x = mesh.centroid(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j || detail::is_near(mesh, j, x, rule.eta))
          a(i, j) = detail::exact_entry(mesh, i, j, rule, scratch);
        else
          a(i, j) = detail::far_entry(nodes, j, x);
      }
    }
  }
  return a;
}

namespace {

void finish(BemSolution& sol) {
  const SurfaceMesh& mesh = *sol.mesh;
  double cap = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j) cap += sol.sigma[j] * mesh.area(j);
  sol.capacity = cap;
  sol.boundary_grad = boundary_gradient(sol);
  if (!(cap > 0.0) || !std::isfinite(cap))
    throw SolverError("non-positive total charge", sol.rcond);
}

void solve_dense(BemSolution& sol) {
  const Eigen::MatrixXd a = assemble_matrix(*sol.mesh, sol.options);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.rows());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  sol.rcond = lu.rcond();
  if (!(sol.rcond > sol.options.min_rcond))
    throw SolverError("collocation matrix is singular or ill-conditioned", sol.rcond);
  sol.sigma = lu.solve(ones);
  sol.sigma += lu.solve(Eigen::VectorXd(ones - a * sol.sigma));
  sol.solve_residual = (ones - a * sol.sigma).norm() / ones.norm();
  if (!(sol.solve_residual < sol.options.residual_tol))
    throw SolverError("linear residual above tolerance", sol.rcond);
}

void solve_iterative(BemSolution& sol) {
  const detail::CollocationOperator op(*sol.mesh, sol.options);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.rows());
  Eigen::GMRES<detail::CollocationOperator, Eigen::IdentityPreconditioner> gmres;
  gmres.set_restart(sol.options.gmres_restart);
  gmres.setMaxIterations(sol.options.gmres_max_iterations);
  gmres.setTolerance(0.1 * sol.options.residual_tol);
  gmres.compute(op);
  const Eigen::VectorXd z = gmres.solve(ones);
  sol.iterative = true;
  sol.iterations = static_cast<int>(gmres.iterations());
  sol.sigma = op.inv_diag().cwiseProduct(z);
  sol.solve_residual = (ones - op.apply_unscaled(sol.sigma)).norm() / ones.norm();
  sol.rcond = std::nan("");
  if (!(sol.solve_residual < sol.options.residual_tol))
    throw SolverError("GMRES did not reach the residual tolerance", sol.rcond);
}

}  // namespace

BemSolution assemble_and_solve(std::shared_ptr<const SurfaceMesh> mesh, const BemOptions& options) {
  if (!mesh || mesh->size() == 0) throw Error(ErrorKind::InvalidDomain, "empty mesh");
  if (mesh->dimension() != 3) throw Error(ErrorKind::UnsupportedDimension, "BEM requires n = 3");
  BemSolution sol;
  sol.mesh = std::move(mesh);
  sol.options = options;
  if (sol.mesh->size() <= options.dense_limit)
    solve_dense(sol);
  else
    solve_iterative(sol);
  finish(sol);
  return sol;
}

BemSolution assemble_and_solve(const SurfaceMesh& mesh, const BemOptions& options) {
  return assemble_and_solve(std::make_shared<const SurfaceMesh>(mesh), options);
}

Eigen::VectorXd boundary_gradient(const BemSolution& sol) {
  return 4.0 * std::numbers::pi * sol.sigma;
}

double CapacityRoutes::max_pairwise_spread() const {
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
  return std::max({rel(charge, flux), rel(flux, pohozaev), rel(charge, pohozaev)});
}

CapacityRoutes capacity_crosschecks(const BemSolution& sol) {
  const SurfaceMesh& mesh = *sol.mesh;
  const double sphere = 4.0 * std::numbers::pi;
  CapacityRoutes c;
  c.charge = sol.capacity;
  double flux = 0.0;
  double poho = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double g = sol.boundary_grad[j];
    flux += g * mesh.area(j);
    poho += g * g * mesh.support(j) * mesh.area(j);
  }
  c.flux = flux / sphere;
  c.pohozaev = poho / sphere;
  return c;
}

}  // namespace capax
