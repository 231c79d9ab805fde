#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "capax/bem.hpp"
#include "capax/field.hpp"
#include "capax/level.hpp"

namespace capax {

enum class Verdict { Holds, Saturated, Violated, OutOfWindow };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// One inequality lhs <= rhs; residual = lhs - rhs, satisfied iff residual <= slack.
struct CheckRecord {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double slack = 0.0;  // absolute
  Verdict verdict = Verdict::Holds;
  std::optional<bool> hypothesis;  // implications only
};

struct VerifyOptions {
  double slack = 0.015;            // relative to |rhs|
  double saturation_tol = 0.01;    // relative to |rhs|
  double probe_tol = 5e-3;
  std::size_t max_principle_points = 500;
  std::uint64_t seed = 1;
  double far_field_radius = 20.0;
  double far_field_tol = 0.02;
  std::vector<double> t_grid = {0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
  LevelOptions level;
};

struct RigidityProbe {
  bool passes = false;
  double residual = 0.0;  // max over probe points of |nabla2 f - (Delta_g f / n) g| / P
  std::size_t points = 0;
};

/// Proportionality test nabla2 f = lambda g over directions at 1.5 and 2.5 boundary radii.
RigidityProbe rigidity_probe(const PotentialField& field, double tol = 5e-3);

/// Shared state for the checks on one solved domain.
class VerifyContext {
 public:
  VerifyContext(BemSolution sol, VerifyOptions options = {});

  const BemSolution& solution() const { return field_->solution(); }
  const SurfaceMesh& mesh() const { return field_->mesh(); }
  const BemField& field() const { return *field_; }
  std::shared_ptr<const BemField> field_ptr() const { return field_; }
  const LevelSetSampler& sampler() const { return *sampler_; }
  const VerifyOptions& options() const { return options_; }
  const RigidityProbe& probe() const;

  double capacity() const { return solution().capacity; }
  double max_boundary_gradient() const { return field_->max_boundary_gradient(); }
  double max_abs_mean_curvature() const;

  /// lhs <= rhs with relative slack; saturated needs the probe.
  CheckRecord inequality(std::string name, std::string anchor, double lhs, double rhs) const;
  /// Implication: a true hypothesis lhs <= rhs (to saturation tolerance) forces a ball.
  CheckRecord implication(std::string name, std::string anchor, double lhs, double rhs) const;
  /// |lhs - rhs| <= tol |rhs|.
  CheckRecord equality(std::string name, std::string anchor, double lhs, double rhs, double tol) const;

 private:
  std::shared_ptr<const BemField> field_;
  std::unique_ptr<LevelSetSampler> sampler_;
  VerifyOptions options_;
  mutable std::optional<RigidityProbe> probe_;
};

CheckRecord check_main_gradient_inequality(const VerifyContext& ctx);
CheckRecord check_sphere_theorem_1(const VerifyContext& ctx);
/// AM-1 bound, capacity vs mean curvature, pinching, starshaped pinching.
std::vector<CheckRecord> check_curvature_inequalities(const VerifyContext& ctx);
CheckRecord check_pfunction_max_principle(const VerifyContext& ctx, const std::vector<Eigen::Vector3d>& points);
CheckRecord check_pfunction_far_field(const VerifyContext& ctx);
/// Per-level Cauchy-Schwarz and isoperimetric records plus the end-to-end PFS record.
std::vector<CheckRecord> check_symmetrization_chain(const VerifyContext& ctx, const std::vector<double>& t_grid);
/// int |Du|^3 / ((n-2) u) <= int |Du|^2 H / (n-1) on each level.
std::vector<CheckRecord> check_level_curvature_integral(const VerifyContext& ctx, const std::vector<double>& t_grid);

/// Seeded exterior sample points inside the field contract.
std::vector<Eigen::Vector3d> max_principle_points(const VerifyContext& ctx);

struct VerificationReport {
  DomainSpec domain;
  CapacityRoutes capacity;
  std::vector<CheckRecord> checks;
  int mesh_level = 0;
  std::size_t panels = 0;
  VerifyOptions options;
  RigidityProbe probe;
  double t_star = 0.0;

  bool has_violation() const;
  std::size_t count(Verdict v) const;
};

VerificationReport verify(const VerifyContext& ctx);

std::string report_to_json(const VerificationReport& report);
/// Inverse of report_to_json for the fields it writes; throws Usage on schema mismatch.
VerificationReport report_from_json(const std::string& text);

}  // namespace capax
