#include "capax/level.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "capax/conformal.hpp"
#include "capax/errors.hpp"
#include "capax/quadrature.hpp"

namespace capax {

double s_from_t(double t, int n) { return -std::tanh(std::log(t) / (n - 2.0)); }

double t_from_s(double s, int n) { return std::pow((1.0 - s) / (1.0 + s), 0.5 * (n - 2.0)); }

LevelSetSampler::LevelSetSampler(std::shared_ptr<const PotentialField> field, LevelOptions options)
    : field_(std::move(field)), options_(options) {
  if (field_->dimension() != 3)
    throw Error(ErrorKind::UnsupportedDimension, "level extraction is implemented for n = 3");
  const auto& gl = quadrature::gauss_legendre(options_.n_theta);
  const int nphi = 2 * options_.n_theta;
  for (int i = 0; i < options_.n_theta; ++i) {
    const double z = 2.0 * gl.nodes[i] - 1.0;
    const double rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * std::numbers::pi * (j + 0.5) / nphi;
      dirs_.emplace_back(rho * std::cos(ph), rho * std::sin(ph), z);
      dir_weights_.push_back(2.0 * gl.weights[i] * 2.0 * std::numbers::pi / nphi);
    }
  }
}

double LevelSetSampler::contract_radius(const Eigen::Vector3d& dir) const {
  const Eigen::Vector3d c = field_->center();
  const double r0 = field_->boundary_radius(dir) * (1.0 + 1e-12);
  if (field_->in_contract(Eigen::VectorXd(c + r0 * dir))) return r0;
  double lo = r0;
  double step = 0.05 * r0;
  double hi = r0 + step;
  while (!field_->in_contract(Eigen::VectorXd(c + hi * dir))) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (hi > 100.0 * r0) throw Error(ErrorKind::Extraction, "no contract-valid point along a ray");
  }
  for (int it = 0; it < 40 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (field_->in_contract(Eigen::VectorXd(c + mid * dir)))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double LevelSetSampler::t_star() const {
  std::lock_guard lock(mutex_);
  if (t_star_) return *t_star_;
  const Eigen::Vector3d c = field_->center();
  const std::size_t nd = dirs_.size();
  std::vector<double> r_min(nd);
  std::vector<double> t_dir(nd);
  const int K = options_.window_samples;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < nd; ++k) {
    const Eigen::Vector3d& w = dirs_[k];
    r_min[k] = contract_radius(w);
    std::vector<double> u(K);
    std::vector<bool> ok(K);
    for (int i = 0; i < K; ++i) {
      const double r = r_min[k] * (1.0 + 0.15 * i);
      const FieldSample s = field_->value_grad(Eigen::VectorXd(c + r * w));
      u[i] = s.u;
      const double gn = s.Du.norm();
      ok[i] = gn > 0.0 && -s.Du.dot(Eigen::VectorXd(w)) / gn >= options_.star_margin;
    }
    int k0 = K;
    for (int i = K - 1; i >= 0; --i) {
      if (!ok[i] || (i + 1 < K && !(u[i] > u[i + 1]))) break;
      k0 = i;
    }
    t_dir[k] = k0 < K ? u[k0] : 0.0;
  }
  r_min_ = std::move(r_min);
  t_star_ = *std::min_element(t_dir.begin(), t_dir.end());
  return *t_star_;
}

const LevelSurface& LevelSetSampler::level(double t) const {
  const double ts = t_star();
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return *it->second;
  }
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::DomainOfDefinition, "level must lie in (0, 1)");
  if (t >= ts)
    throw Error(ErrorKind::LevelNotStarshaped,
                "level " + std::to_string(t) + " is above the star-shaped window " + std::to_string(ts));
  auto surf = std::make_unique<LevelSurface>(extract(t));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(t, std::move(surf));
  return *it->second;
}

LevelSurface LevelSetSampler::extract(double t) const {
  const Eigen::Vector3d c = field_->center();
  const int n = field_->dimension();
  const std::size_t nd = dirs_.size();
  LevelSurface L;
  L.t = t;
  L.s = s_from_t(t, n);
  L.n = n;
  L.nodes.resize(nd);
  std::vector<int> failure(nd, 0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < nd; ++k) {
    const Eigen::Vector3d& w = dirs_[k];
    const Eigen::VectorXd wx = w;
    double lo = r_min_[k];
    double hi = std::numeric_limits<double>::infinity();
    FieldSample s = field_->value_grad(Eigen::VectorXd(c + lo * w));
    if (!(s.u > t)) {
      failure[k] = 1;
      continue;
    }
    double r = lo * std::pow(s.u / t, 1.0 / (n - 2.0));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      s = field_->value_grad(Eigen::VectorXd(c + r * w));
      const double g = s.u - t;
      if (std::abs(g) <= options_.root_tol * t) {
        converged = true;
        break;
      }
      if (g > 0.0)
        lo = r;
      else
        hi = r;
      const double dr = s.Du.dot(wx);
      double next = dr < 0.0 ? r - g / dr : std::numeric_limits<double>::quiet_NaN();
      if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * r;
      if (std::isfinite(hi) && hi - lo <= 1e-15 * hi) {
        converged = std::abs(g) <= 1e-8;
        break;
      }
      r = next;
    }
    if (!converged) {
      failure[k] = 2;
      continue;
    }
    LevelNode& node = L.nodes[k];
    node.direction = w;
    node.radius = r;
    node.sample = field_->sample(Eigen::VectorXd(c + r * w));
    const double gn = node.sample.Du.norm();
    const double cosine = -node.sample.Du.dot(wx) / gn;
    if (!(cosine >= options_.star_margin)) {
      failure[k] = 3;
      continue;
    }
    node.weight = dir_weights_[k] * r * r / cosine;
  }
  for (int f : failure) {
    if (f == 1) throw Error(ErrorKind::LevelNotStarshaped, "level crosses the boundary exclusion shell");
    if (f == 2) throw Error(ErrorKind::Extraction, "level root not bracketed along a ray");
    if (f == 3) throw Error(ErrorKind::LevelNotStarshaped, "ray meets the level set at a grazing angle");
  }
  const double one_m = 1.0 - L.s;
  for (std::size_t k = 0; k < nd; ++k) {
    const LevelNode& node = L.nodes[k];
    L.euclidean_area += node.weight;
    L.volume += dir_weights_[k] * std::pow(node.radius, 3) / 3.0;
    L.max_level_error = std::max(L.max_level_error, std::abs(node.sample.u - t));
  }
  L.area_g = std::pow(one_m, n - 1.0) * L.euclidean_area;
  if (L.max_level_error > 1e-8) throw Error(ErrorKind::Extraction, "level nodes miss the level value");
  return L;
}

LevelSurface extract_level(std::shared_ptr<const PotentialField> field, double t, const LevelOptions& options) {
  return LevelSetSampler(std::move(field), options).level(t);
}

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::Up: return "U_p";
    case FunctionalKind::Phi: return "Phi";
    case FunctionalKind::Flux: return "Flux";
    case FunctionalKind::InvGradIntegral: return "InvGradIntegral";
    case FunctionalKind::AreaEuclidean: return "AreaEuclidean";
    case FunctionalKind::Volume: return "Volume";
  }
  return "unknown";
}

double u_functional(const LevelSurface& level, double capacity, double p) {
  const int n = level.n;
  double sum = 0.0;
  for (const auto& node : level.nodes) sum += std::pow(node.sample.Du.norm(), p) * node.weight;
  return std::pow(capacity / level.t, (p - 1.0) * (n - 1.0) / (n - 2.0)) * sum;
}

double u_functional(const LevelSetSampler& sampler, double t, double p) {
  return u_functional(sampler.level(t), sampler.field().capacity(), p);
}

double phi_functional(const LevelSurface& level) {
  const int n = level.n;
  double sum = 0.0;
  for (const auto& node : level.nodes) {
    const ConformalSample cs = lift(node.sample);
    sum += std::pow(cs.norm_grad_f_g_sq, 1.5) * std::pow(1.0 - cs.f, n - 1.0) * node.weight;
  }
  return std::pow(1.0 - level.s * level.s, -0.5 * (n + 2.0)) * sum;
}

double phi_functional(const LevelSetSampler& sampler, double s) {
  const int n = sampler.field().dimension();
  return phi_functional(sampler.level(t_from_s(s, n)));
}

PhiIdentity phi_derivative_identity(const LevelSetSampler& sampler, double s, double ds, double eps) {
  const int n = sampler.field().dimension();
  const double m = n - 2.0;
  PhiIdentity r;
  r.s = s;
  r.ds = ds;
  const double phi_p = phi_functional(sampler, s + ds);
  const double phi_m = phi_functional(sampler, s - ds);
  r.lhs = std::pow(1.0 - s * s, 0.5 * (n + 2.0)) * (phi_p - phi_m) / (2.0 * ds);

  const LevelSurface& L = sampler.level(t_from_s(s, n));
  double i2 = 0.0;
  double i3 = 0.0;
  double uform = 0.0;
  for (const auto& node : L.nodes) {
    const ConformalSample cs = lift(node.sample);
    const LevelCurvature k = level_mean_curvature_g(cs);
    const double dsg = std::pow(1.0 - cs.f, n - 1.0) * node.weight;
    i2 += cs.norm_grad_f_g_sq * k.H_g * dsg;
    i3 += std::pow(cs.norm_grad_f_g_sq, 1.5) * dsg;
    const double gu = node.sample.Du.norm();
    uform += gu * gu * (k.H_euclidean / (n - 1.0) - gu / (m * node.sample.u)) * node.weight;
  }
  r.rhs = -2.0 * (i2 + (n - 1.0) * s / (1.0 - s * s) * i3);
  r.u_integrand = uform;
  r.rhs_u_form = -2.0 * (n - 1.0) * std::pow(1.0 + s, n) / (m * m) * uform;
  r.residual = std::abs(r.lhs - r.rhs) / (std::abs(r.rhs) + eps);
  return r;
}

FluxVolumeCurves flux_and_volume_curves(const LevelSetSampler& sampler, const std::vector<double>& t_grid) {
  FluxVolumeCurves c;
  c.flux.kind = FunctionalKind::Flux;
  c.inv_grad.kind = FunctionalKind::InvGradIntegral;
  c.volume.kind = FunctionalKind::Volume;
  c.area.kind = FunctionalKind::AreaEuclidean;
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    const LevelSurface& L = sampler.level(t);
    double flux = 0.0;
    double inv = 0.0;
    for (const auto& node : L.nodes) {
      const double g = node.sample.Du.norm();
      flux += g * node.weight;
      inv += node.weight / g;
    }
    for (auto* curve : {&c.flux, &c.inv_grad, &c.volume, &c.area}) curve->params.push_back(t);
    c.flux.values.push_back(flux);
    c.inv_grad.values.push_back(inv);
    c.volume.values.push_back(L.volume);
    c.area.values.push_back(L.euclidean_area);
  }
  return c;
}

FunctionalCurve u_curve(const LevelSetSampler& sampler, const std::vector<double>& t_grid, double p) {
  FunctionalCurve c;
  c.kind = FunctionalKind::Up;
  c.p = p;
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    c.params.push_back(t);
    c.values.push_back(u_functional(sampler, t, p));
  }
  return c;
}

FunctionalCurve phi_curve(const LevelSetSampler& sampler, const std::vector<double>& t_grid) {
  FunctionalCurve c;
  c.kind = FunctionalKind::Phi;
  c.param = 's';
  const int n = sampler.field().dimension();
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end(), std::greater<>());
  for (double t : ts) {
    c.params.push_back(s_from_t(t, n));
    c.values.push_back(phi_functional(sampler.level(t)));
  }
  return c;
}

std::string curves_to_csv(const std::vector<FunctionalCurve>& curves) {
  std::string out = "param,kind,p,value\n";
  char buf[128];
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      if (c.kind == FunctionalKind::Up)
        std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g\n", c.params[i], to_string(c.kind).c_str(), c.p,
                      c.values[i]);
      else
        std::snprintf(buf, sizeof buf, "%.17g,%s,,%.17g\n", c.params[i], to_string(c.kind).c_str(), c.values[i]);
      out += buf;
    }
  }
  return out;
}

}  // namespace capax
