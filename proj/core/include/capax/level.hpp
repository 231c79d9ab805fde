#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "capax/field.hpp"

namespace capax {

struct LevelOptions {
  /// Gauss-Legendre points in cos(theta); 2 * n_theta uniform points in phi.
  int n_theta = 24;
  /// Minimum cosine between a ray and the level normal.
  double star_margin = 0.05;
  double root_tol = 1e-12;
  /// Radial samples per ray when detecting the star-shaped window.
  int window_samples = 16;
};

struct LevelNode {
  Eigen::Vector3d direction;
  double radius = 0.0;
  double weight = 0.0;  // Euclidean surface element
  FieldSample sample;
};

/// Quadrature of the level set {u = t} = {f = s} as a radial graph over the center.
struct LevelSurface {
  double t = 0.0;
  double s = 0.0;
  int n = 3;
  std::vector<LevelNode> nodes;
  double euclidean_area = 0.0;
  double area_g = 0.0;
  double volume = 0.0;  // enclosed volume (1/3) int r^3 dw
  double max_level_error = 0.0;
};

/// s = -tanh(log t / (n-2)) and its inverse.
double s_from_t(double t, int n);
double t_from_s(double s, int n);

/// Extracts and caches level sets of one field. Thread-safe.
class LevelSetSampler {
 public:
  explicit LevelSetSampler(std::shared_ptr<const PotentialField> field, LevelOptions options = {});

  const PotentialField& field() const { return *field_; }
  const LevelOptions& options() const { return options_; }

  /// Largest level whose surface is star-shaped with margin and within the field contract.
  double t_star() const;
  /// Throws LevelNotStarshaped for t >= t_star, Extraction when a ray has no root.
  const LevelSurface& level(double t) const;

 private:
  LevelSurface extract(double t) const;
  double contract_radius(const Eigen::Vector3d& dir) const;

  std::shared_ptr<const PotentialField> field_;
  LevelOptions options_;
  std::vector<Eigen::Vector3d> dirs_;
  std::vector<double> dir_weights_;
  mutable std::mutex mutex_;
  mutable std::optional<double> t_star_;
  mutable std::vector<double> r_min_;
  mutable std::map<double, std::unique_ptr<LevelSurface>> cache_;
};

LevelSurface extract_level(std::shared_ptr<const PotentialField> field, double t, const LevelOptions& options = {});

enum class FunctionalKind { Up, Phi, Flux, InvGradIntegral, AreaEuclidean, Volume };

std::string to_string(FunctionalKind kind);

struct FunctionalCurve {
  FunctionalKind kind = FunctionalKind::Up;
  char param = 't';  // 't' or 's'
  double p = 0.0;    // only meaningful for Up
  std::vector<double> params;
  std::vector<double> values;
};

/// U_p(t) = (Cap/t)^{(p-1)(n-1)/(n-2)} int_{u=t} |Du|^p.
double u_functional(const LevelSetSampler& sampler, double t, double p);
double u_functional(const LevelSurface& level, double capacity, double p);

/// Phi(s) = (1-s^2)^{-(n+2)/2} int_{f=s} |grad f|_g^3 dsigma_g, from lifted node data.
double phi_functional(const LevelSetSampler& sampler, double s);
double phi_functional(const LevelSurface& level);

struct PhiIdentity {
  double s = 0.0;
  double ds = 0.0;
  double lhs = 0.0;        // (1-s^2)^{(n+2)/2} Phi'(s) by central difference
  double rhs = 0.0;        // -2 [int |grad f|^2 H_g + (n-1) s/(1-s^2) int |grad f|^3], g-measures
  double rhs_u_form = 0.0; // the same bracket written with u, Du and Euclidean H
  double u_integrand = 0.0;  // int |Du|^2 [H/(n-1) - |Du|/((n-2)u)] dsigma
  double residual = 0.0;     // |lhs - rhs| / (|rhs| + eps)
};

PhiIdentity phi_derivative_identity(const LevelSetSampler& sampler, double s, double ds, double eps = 1e-12);

struct FluxVolumeCurves {
  FunctionalCurve flux;
  FunctionalCurve inv_grad;
  FunctionalCurve volume;
  FunctionalCurve area;
};

FluxVolumeCurves flux_and_volume_curves(const LevelSetSampler& sampler, const std::vector<double>& t_grid);

FunctionalCurve u_curve(const LevelSetSampler& sampler, const std::vector<double>& t_grid, double p);
/// Phi sampled at s(t) for each t; parameters are reported in s, ascending.
FunctionalCurve phi_curve(const LevelSetSampler& sampler, const std::vector<double>& t_grid);

/// CSV with header `param,kind,p,value`, 17 significant digits.
std::string curves_to_csv(const std::vector<FunctionalCurve>& curves);

}  // namespace capax
