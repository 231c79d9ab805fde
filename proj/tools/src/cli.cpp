#include "capax_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <capax/errors.hpp>
#include <capax/field.hpp>
#include <capax/level.hpp>
#include <capax/parallel.hpp>

namespace capax::cli {

namespace {

using json = nlohmann::ordered_json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::InvalidDomain:
    case ErrorKind::UnsupportedDimension:
      return kUsage;
    default:
      return kNumerical;
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Usage, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::Usage, "cannot write " + path.string());
}

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec || !std::filesystem::is_directory(config.output))
    throw Error(ErrorKind::Usage, "output directory not usable: " + config.output.string());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BemSolution solve(const RunConfig& config, std::ostream& log) {
  check_config(config);
  auto mesh = std::make_shared<const SurfaceMesh>(build_mesh(config.domain, config.mesh_level));
  BemSolution sol = assemble_and_solve(mesh);
  log << "solved " << kind_name(config.domain) << " level " << config.mesh_level << " (" << mesh->size()
      << " panels): capacity " << fmt(sol.capacity) << "\n";
  return sol;
}

void write_capacity(const RunConfig& config, const BemSolution& sol) {
  write_file(config.output / "capacity.json", capacity_json(sol, capacity_crosschecks(sol)));
}

void write_curves(const RunConfig& config, const LevelSetSampler& sampler, std::ostream& log) {
  std::vector<FunctionalCurve> curves;
  for (double p : config.p_values) curves.push_back(u_curve(sampler, config.t_grid, p));
  curves.push_back(phi_curve(sampler, config.t_grid));
  FluxVolumeCurves fv = flux_and_volume_curves(sampler, config.t_grid);
  curves.push_back(std::move(fv.flux));
  curves.push_back(std::move(fv.inv_grad));
  curves.push_back(std::move(fv.volume));
  curves.push_back(std::move(fv.area));
  write_file(config.output / "curves.csv", curves_to_csv(curves));

  const int n = sampler.field().dimension();
  std::vector<PhiIdentity> rows;
  for (double t : config.t_grid) {
    const double s = s_from_t(t, n);
    const double ds = std::min(0.01, 0.25 * (1.0 - s));
    rows.push_back(phi_derivative_identity(sampler, s, ds));
  }
  std::sort(rows.begin(), rows.end(), [](const PhiIdentity& a, const PhiIdentity& b) { return a.s < b.s; });
  write_file(config.output / "phi_identity.csv", phi_identity_csv(rows));
  log << "curves: " << curves.size() << " functionals on " << config.t_grid.size() << " levels\n";
}

int write_report(const RunConfig& config, const VerifyContext& ctx, std::ostream& log) {
  const VerificationReport report = verify(ctx);
  write_file(config.output / "report.json", report_to_json(report));
  log << "checks: " << report.checks.size() << " holds " << report.count(Verdict::Holds) << " saturated "
      << report.count(Verdict::Saturated) << " violated " << report.count(Verdict::Violated)
      << " out_of_window " << report.count(Verdict::OutOfWindow) << "\n";
  for (const auto& c : report.checks)
    if (c.verdict == Verdict::Violated)
      log << "violated: " << c.name << " lhs " << fmt(c.lhs) << " rhs " << fmt(c.rhs) << "\n";
  return report.has_violation() ? kViolation : kOk;
}

std::shared_ptr<const BemField> make_field(BemSolution sol) {
  return std::make_shared<const BemField>(std::move(sol));
}

}  // namespace

void check_config(const RunConfig& config) {
  validate(config.domain);
  if (config.mesh_level < 2 || config.mesh_level > 6)
    throw Error(ErrorKind::Usage, "mesh level must lie in [2, 6]");
  if (config.t_grid.empty()) throw Error(ErrorKind::Usage, "level grid is empty");
  for (double t : config.t_grid)
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::Usage, "levels must lie in (0, 1), got " + fmt(t));
  for (double p : config.p_values)
    if (!std::isfinite(p)) throw Error(ErrorKind::Usage, "p values must be finite");
  if (config.p_values.empty()) throw Error(ErrorKind::Usage, "no p values");
  for (const auto& [key, value] : config.tolerances) {
    if (key != "slack") throw Error(ErrorKind::Usage, "unknown tolerance " + key);
    if (!(value >= 0.0 && std::isfinite(value))) throw Error(ErrorKind::Usage, "slack must be a finite non-negative real");
  }
}

VerifyOptions verify_options(const RunConfig& config) {
  VerifyOptions o;
  o.t_grid = config.t_grid;
  o.seed = config.seed;
  if (auto it = config.tolerances.find("slack"); it != config.tolerances.end()) o.slack = it->second;
  return o;
}

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorKind::Usage, "empty entry in list '" + csv + "'");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorKind::Usage, "not a real number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string capacity_json(const BemSolution& sol, const CapacityRoutes& routes) {
  const SurfaceMesh& mesh = *sol.mesh;
  const auto& h = mesh.mean_curvatures();
  json j;
  j["domain"] = json::parse(domain_spec_to_json(mesh.spec()));
  j["mesh_level"] = mesh.level();
  j["panels"] = mesh.size();
  j["capacity"] = {{"charge", routes.charge}, {"flux", routes.flux}, {"pohozaev", routes.pohozaev}};
  j["route_spread"] = routes.max_pairwise_spread();
  j["max_grad_u"] = boundary_gradient(sol).cwiseAbs().maxCoeff();
  j["max_mean_curvature"] = *std::max_element(h.begin(), h.end());
  j["min_mean_curvature"] = *std::min_element(h.begin(), h.end());
  j["solver"] = {{"iterative", sol.iterative},
                 {"iterations", sol.iterations},
                 {"residual", sol.solve_residual},
                 {"rcond", sol.rcond}};
  return j.dump(2) + "\n";
}

std::string phi_identity_csv(const std::vector<PhiIdentity>& rows) {
  std::string out = "s,ds,lhs,rhs,rhs_u_form,residual\n";
  for (const auto& r : rows)
    out += fmt(r.s) + "," + fmt(r.ds) + "," + fmt(r.lhs) + "," + fmt(r.rhs) + "," + fmt(r.rhs_u_form) + "," +
           fmt(r.residual) + "\n";
  return out;
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  prepare_output(config);
  write_capacity(config, solve(config, log));
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  prepare_output(config);
  VerifyContext ctx(solve(config, log), verify_options(config));
  return write_report(config, ctx, log);
}

int cmd_curves(const RunConfig& config, std::ostream& log) {
  prepare_output(config);
  LevelSetSampler sampler(make_field(solve(config, log)), verify_options(config).level);
  write_curves(config, sampler, log);
  return kOk;
}

int cmd_report(const RunConfig& config, std::ostream& log) {
  prepare_output(config);
  BemSolution sol = solve(config, log);
  write_capacity(config, sol);
  VerifyContext ctx(std::move(sol), verify_options(config));
  const int code = write_report(config, ctx, log);
  write_curves(config, ctx.sampler(), log);
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"capax: capacity and level-set inequality toolkit"};
  app.require_subcommand(1);

  std::string domain_path;
  int mesh_level = RunConfig{}.mesh_level;
  std::string p_csv;
  std::string levels_csv;
  double slack = VerifyOptions{}.slack;
  std::string out_dir = ".";
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--domain", domain_path, "domain spec (JSON)")->required();
    sub->add_option("--mesh-level", mesh_level, "icosphere subdivision level, 2..6");
    sub->add_option("--p", p_csv, "comma separated exponents for U_p");
    sub->add_option("--levels", levels_csv, "comma separated levels t in (0,1)");
    sub->add_option("--slack", slack, "relative inequality slack");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for exterior sample points");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "capacity and boundary data -> capacity.json");
  CLI::App* verify_cmd = app.add_subcommand("verify", "all inequality checks -> report.json");
  CLI::App* curves_cmd = app.add_subcommand("curves", "level functionals -> curves.csv, phi_identity.csv");
  CLI::App* report_cmd = app.add_subcommand("report", "solve, verify and curves");
  for (CLI::App* sub : {solve_cmd, verify_cmd, curves_cmd, report_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "capax: " << e.what() << "\n";
    return kUsage;
  }

  try {
    configure_threads_from_env();
    RunConfig config;
    config.domain = load_domain_spec(domain_path);
    config.mesh_level = mesh_level;
    CLI::App* used = app.get_subcommands().front();
    if (used->count("--p")) config.p_values = p_csv.empty() ? std::vector<double>{} : parse_reals(p_csv);
    if (used->count("--levels")) config.t_grid = levels_csv.empty() ? std::vector<double>{} : parse_reals(levels_csv);
    if (used->count("--slack")) config.tolerances["slack"] = slack;
    config.output = out_dir;
    config.seed = seed;
    check_config(config);

    if (solve_cmd->parsed()) return cmd_solve(config, out);
    if (verify_cmd->parsed()) return cmd_verify(config, out);
    if (curves_cmd->parsed()) return cmd_curves(config, out);
    return cmd_report(config, out);
  } catch (const Error& e) {
    err << "capax: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "capax: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace capax::cli
