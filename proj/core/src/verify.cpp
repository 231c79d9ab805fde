#include "capax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "capax/conformal.hpp"
#include "capax/errors.hpp"
#include "capax/oracles.hpp"
#include "capax/sampling.hpp"

namespace capax {

namespace {

std::string level_tag(const char* base, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[t=%.2f]", base, t);
  return buf;
}

std::vector<Eigen::VectorXd> probe_directions(int n) {
  std::vector<Eigen::VectorXd> dirs;
  if (n == 3) {
    for (const auto& d : fibonacci_sphere(48)) dirs.emplace_back(Eigen::VectorXd(d));
    return dirs;
  }
  for (int i = 0; i < n; ++i)
    for (double s : {-1.0, 1.0}) dirs.push_back(s * Eigen::VectorXd::Unit(n, i));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    v[i] = -2.0;
    dirs.push_back(v.normalized());
  }
  return dirs;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Saturated: return "saturated";
    case Verdict::Violated: return "violated";
    case Verdict::OutOfWindow: return "out-of-window";
  }
  return "unknown";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "holds") return Verdict::Holds;
  if (s == "saturated") return Verdict::Saturated;
  if (s == "violated") return Verdict::Violated;
  if (s == "out-of-window") return Verdict::OutOfWindow;
  throw Error(ErrorKind::Usage, "unknown verdict '" + s + "'");
}

RigidityProbe rigidity_probe(const PotentialField& field, double tol) {
  const auto dirs = probe_directions(field.dimension());
  const Eigen::VectorXd c = field.center();
  const std::array<double, 2> factors{1.5, 2.5};
  std::vector<double> res(dirs.size() * factors.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < res.size(); ++k) {
    const Eigen::VectorXd& d = dirs[k / factors.size()];
    const double r = factors[k % factors.size()] * field.boundary_radius(d);
    const ConformalSample cs = lift(field.sample(c + r * d));
    res[k] = proportionality_residual(cs) / cs.P;
  }
  RigidityProbe p;
  p.points = res.size();
  p.residual = *std::max_element(res.begin(), res.end());
  p.passes = p.residual <= tol;
  return p;
}

VerifyContext::VerifyContext(BemSolution sol, VerifyOptions options)
    : field_(std::make_shared<BemField>(std::move(sol))), options_(std::move(options)) {
  sampler_ = std::make_unique<LevelSetSampler>(field_, options_.level);
}

const RigidityProbe& VerifyContext::probe() const {
  if (!probe_) probe_ = rigidity_probe(*field_, options_.probe_tol);
  return *probe_;
}

double VerifyContext::max_abs_mean_curvature() const {
  double h = 0.0;
  for (double v : mesh().mean_curvatures()) h = std::max(h, std::abs(v));
  return h;
}

CheckRecord VerifyContext::inequality(std::string name, std::string anchor, double lhs, double rhs) const {
  CheckRecord r{std::move(name), std::move(anchor), lhs, rhs, lhs - rhs, options_.slack * std::abs(rhs), Verdict::Holds, std::nullopt};
  if (std::abs(r.residual) <= options_.saturation_tol * std::abs(rhs) && probe().passes)
    r.verdict = Verdict::Saturated;
  else if (r.residual <= r.slack)
    r.verdict = Verdict::Holds;
  else
    r.verdict = Verdict::Violated;
  return r;
}

CheckRecord VerifyContext::implication(std::string name, std::string anchor, double lhs, double rhs) const {
  CheckRecord r{std::move(name), std::move(anchor), lhs, rhs, lhs - rhs, options_.saturation_tol * std::abs(rhs), Verdict::Holds, std::nullopt};
  const bool hyp = r.residual <= r.slack;
  r.hypothesis = hyp;
  if (!hyp)
    r.verdict = Verdict::Holds;
  else
    r.verdict = probe().passes ? Verdict::Saturated : Verdict::Violated;
  return r;
}

CheckRecord VerifyContext::equality(std::string name, std::string anchor, double lhs, double rhs, double tol) const {
  CheckRecord r{std::move(name), std::move(anchor), lhs, rhs, std::abs(lhs - rhs), tol * std::abs(rhs), Verdict::Holds, std::nullopt};
  if (r.residual <= options_.saturation_tol * std::abs(rhs) && probe().passes)
    r.verdict = Verdict::Saturated;
  else if (r.residual <= r.slack)
    r.verdict = Verdict::Holds;
  else
    r.verdict = Verdict::Violated;
  return r;
}

CheckRecord check_main_gradient_inequality(const VerifyContext& ctx) {
  return ctx.inequality("main_gradient_inequality", "1/Cap <= (max|Du|/(n-2))^(n-2)", 1.0 / ctx.capacity(),
                        ctx.max_boundary_gradient());
}

CheckRecord check_sphere_theorem_1(const VerifyContext& ctx) {
  const double bound = std::sqrt(sphere_area(3) / ctx.mesh().total_area());
  return ctx.implication("sphere_theorem_surface_radius", "max|Du/(n-2)| <= (|S^(n-1)|/|dOmega|)^(1/(n-1)) => ball",
                         ctx.max_boundary_gradient(), bound);
}

std::vector<CheckRecord> check_curvature_inequalities(const VerifyContext& ctx) {
  const double hmax = ctx.max_abs_mean_curvature() / 2.0;
  const double cap = ctx.capacity();
  std::vector<CheckRecord> out;
  out.push_back(ctx.inequality("boundary_gradient_vs_curvature", "max|Du/(n-2)| <= max|H/(n-1)|",
                               ctx.max_boundary_gradient(), hmax));
  out.push_back(ctx.inequality("capacity_vs_mean_curvature", "1/Cap <= (max|H/(n-1)|)^(n-2)", 1.0 / cap, hmax));
  out.push_back(ctx.implication("mean_curvature_pinching", "|H/(n-1)| <= Cap^(-1/(n-2)) on dOmega => ball", hmax,
                                1.0 / cap));
  const double volume = enclosed_volume(ctx.mesh());
  const double star_rhs = std::cbrt(ball_volume(3) / volume);
  if (starshapedness(ctx.mesh()) > 0.0) {
    out.push_back(ctx.implication("starshaped_pinching", "|H|/(n-1) <= (|B^n|/|Omega|)^(1/n) on dOmega => ball",
                                  hmax, star_rhs));
  } else {
    CheckRecord r{"starshaped_pinching", "|H|/(n-1) <= (|B^n|/|Omega|)^(1/n) on dOmega => ball", hmax, star_rhs,
                  hmax - star_rhs, 0.0, Verdict::OutOfWindow, std::nullopt};
    out.push_back(r);
  }
  return out;
}

std::vector<Eigen::Vector3d> max_principle_points(const VerifyContext& ctx) {
  const auto raw = exterior_points(ctx.options().max_principle_points, ctx.options().seed, 1.2, 4.0);
  const Eigen::Vector3d c = ctx.mesh().center();
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(raw.size());
  for (const auto& v : raw) {
    const double factor = v.norm();
    const Eigen::Vector3d w = v / factor;
    double r = factor * ctx.mesh().boundary_radius(w);
    while (!ctx.field().in_contract(Eigen::VectorXd(c + r * w))) r *= 1.1;
    pts.push_back(c + r * w);
  }
  return pts;
}

CheckRecord check_pfunction_max_principle(const VerifyContext& ctx, const std::vector<Eigen::Vector3d>& points) {
  std::vector<double> vals(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < points.size(); ++k) {
    const FieldSample s = ctx.field().value_grad(Eigen::VectorXd(points[k]));
    vals[k] = s.Du.norm() / (s.u * s.u);
  }
  const double lhs = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
  return ctx.inequality("pfunction_max_principle", "|Du| u^(-(n-1)/(n-2)) <= max_dOmega |Du|", lhs,
                        ctx.max_boundary_gradient());
}

CheckRecord check_pfunction_far_field(const VerifyContext& ctx) {
  const auto dirs = fibonacci_sphere(32);
  const double rhs = 1.0 / ctx.capacity();
  std::vector<double> vals(dirs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const FieldSample s = ctx.field().value_grad(Eigen::VectorXd(ctx.options().far_field_radius * dirs[k]));
    vals[k] = s.Du.norm() / (s.u * s.u);
  }
  double lhs = vals[0];
  for (double v : vals)
    if (std::abs(v - rhs) > std::abs(lhs - rhs)) lhs = v;
  return ctx.equality("pfunction_far_field", "|Du| u^(-(n-1)/(n-2)) -> (n-2) Cap^(-1/(n-2)) as |x| -> inf", lhs, rhs,
                      ctx.options().far_field_tol);
}

std::vector<CheckRecord> check_symmetrization_chain(const VerifyContext& ctx, const std::vector<double>& t_grid) {
  std::vector<CheckRecord> out;
  const double t_star = ctx.sampler().t_star();
  const char* cs_anchor = "|Sigma_t|^2 <= int|Du| * int 1/|Du|";
  const char* iso_anchor = "(|Omega_t|/|B^n|)^(1/n) <= (|Sigma_t|/|S^(n-1)|)^(1/(n-1))";
  for (double t : t_grid) {
    if (!(t < t_star)) {
      out.push_back({level_tag("cauchy_schwarz", t), cs_anchor, 0, 0, 0, 0, Verdict::OutOfWindow, std::nullopt});
      out.push_back({level_tag("isoperimetric", t), iso_anchor, 0, 0, 0, 0, Verdict::OutOfWindow, std::nullopt});
      continue;
    }
    const FluxVolumeCurves c = flux_and_volume_curves(ctx.sampler(), {t});
    const double area = c.area.values[0];
    out.push_back(ctx.inequality(level_tag("cauchy_schwarz", t), cs_anchor, area * area,
                                 c.flux.values[0] * c.inv_grad.values[0]));
    out.push_back(ctx.inequality(level_tag("isoperimetric", t), iso_anchor,
                                 std::cbrt(c.volume.values[0] / ball_volume(3)),
                                 std::sqrt(area / sphere_area(3))));
  }
  const double vol = enclosed_volume(ctx.mesh());
  out.push_back(ctx.inequality("pfs", "(|Omega|/|B^n|)^((n-2)/n) <= Cap", std::cbrt(vol / ball_volume(3)),
                               ctx.capacity()));
  return out;
}

std::vector<CheckRecord> check_level_curvature_integral(const VerifyContext& ctx, const std::vector<double>& t_grid) {
  std::vector<CheckRecord> out;
  const double t_star = ctx.sampler().t_star();
  const char* anchor = "int |Du|^3/((n-2)u) <= int |Du|^2 H/(n-1) on {u=t}";
  for (double t : t_grid) {
    if (!(t < t_star)) {
      out.push_back({level_tag("level_curvature_integral", t), anchor, 0, 0, 0, 0, Verdict::OutOfWindow, std::nullopt});
      continue;
    }
    const LevelSurface& L = ctx.sampler().level(t);
    double lhs = 0.0;
    double rhs = 0.0;
    for (const auto& node : L.nodes) {
      const FieldSample& s = node.sample;
      const double g = s.Du.norm();
      lhs += g * g * g / s.u * node.weight;
      rhs += s.Du.dot(s.D2u * s.Du) / g / 2.0 * node.weight;
    }
    out.push_back(ctx.inequality(level_tag("level_curvature_integral", t), anchor, lhs, rhs));
  }
  return out;
}

bool VerificationReport::has_violation() const { return count(Verdict::Violated) > 0; }

std::size_t VerificationReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [v](const CheckRecord& r) { return r.verdict == v; }));
}

VerificationReport verify(const VerifyContext& ctx) {
  VerificationReport rep;
  rep.domain = ctx.mesh().spec();
  rep.capacity = capacity_crosschecks(ctx.solution());
  rep.mesh_level = ctx.mesh().level();
  rep.panels = ctx.mesh().size();
  rep.options = ctx.options();
  rep.probe = ctx.probe();
  rep.t_star = ctx.sampler().t_star();

  auto& c = rep.checks;
  c.push_back(check_main_gradient_inequality(ctx));
  c.push_back(check_sphere_theorem_1(ctx));
  for (auto& r : check_curvature_inequalities(ctx)) c.push_back(std::move(r));
  c.push_back(check_pfunction_max_principle(ctx, max_principle_points(ctx)));
  c.push_back(check_pfunction_far_field(ctx));
  for (auto& r : check_symmetrization_chain(ctx, ctx.options().t_grid)) c.push_back(std::move(r));
  for (auto& r : check_level_curvature_integral(ctx, ctx.options().t_grid)) c.push_back(std::move(r));
  return rep;
}

}  // namespace capax
