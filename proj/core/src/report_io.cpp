#include <nlohmann/json.hpp>

#include "capax/errors.hpp"
#include "capax/verify.hpp"

namespace capax {

using nlohmann::json;

std::string report_to_json(const VerificationReport& r) {
  json j;
  j["domain"] = json::parse(domain_spec_to_json(r.domain));
  j["capacity"] = {{"charge", r.capacity.charge}, {"flux", r.capacity.flux}, {"pohozaev", r.capacity.pohozaev}};
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name},         {"anchor", c.anchor}, {"lhs", c.lhs},
              {"rhs", c.rhs},           {"residual", c.residual}, {"slack", c.slack},
              {"verdict", to_string(c.verdict)}};
    if (c.hypothesis) e["hypothesis"] = *c.hypothesis;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["meta"] = {{"mesh_level", r.mesh_level},
               {"panels", r.panels},
               {"slack", r.options.slack},
               {"saturation_tol", r.options.saturation_tol},
               {"probe_tol", r.options.probe_tol},
               {"probe_residual", r.probe.residual},
               {"probe_passes", r.probe.passes},
               {"seed", r.options.seed},
               {"max_principle_points", r.options.max_principle_points},
               {"far_field_radius", r.options.far_field_radius},
               {"t_grid", r.options.t_grid},
               {"t_star", r.t_star},
               {"level_directions", 2 * r.options.level.n_theta * r.options.level.n_theta}};
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  VerificationReport r;
  try {
    const json j = json::parse(text);
    r.domain = parse_domain_spec(j.at("domain").dump());
    const auto& cap = j.at("capacity");
    r.capacity = {cap.at("charge").get<double>(), cap.at("flux").get<double>(), cap.at("pohozaev").get<double>()};
    for (const auto& e : j.at("checks")) {
      CheckRecord c;
      c.name = e.at("name").get<std::string>();
      c.anchor = e.at("anchor").get<std::string>();
      c.lhs = e.at("lhs").get<double>();
      c.rhs = e.at("rhs").get<double>();
      c.residual = e.at("residual").get<double>();
      c.slack = e.at("slack").get<double>();
      c.verdict = verdict_from_string(e.at("verdict").get<std::string>());
      if (e.contains("hypothesis")) c.hypothesis = e.at("hypothesis").get<bool>();
      r.checks.push_back(std::move(c));
    }
    const auto& m = j.at("meta");
    r.mesh_level = m.at("mesh_level").get<int>();
    r.panels = m.at("panels").get<std::size_t>();
    r.options.slack = m.at("slack").get<double>();
    r.options.saturation_tol = m.at("saturation_tol").get<double>();
    r.options.probe_tol = m.at("probe_tol").get<double>();
    r.probe.residual = m.at("probe_residual").get<double>();
    r.probe.passes = m.at("probe_passes").get<bool>();
    r.options.seed = m.at("seed").get<std::uint64_t>();
    r.options.max_principle_points = m.at("max_principle_points").get<std::size_t>();
    r.options.far_field_radius = m.at("far_field_radius").get<double>();
    r.options.t_grid = m.at("t_grid").get<std::vector<double>>();
    r.t_star = m.at("t_star").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("report does not match the schema: ") + e.what());
  }
  return r;
}

}  // namespace capax
