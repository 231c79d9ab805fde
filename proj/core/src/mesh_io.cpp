#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "capax/errors.hpp"
#include "capax/geometry.hpp"

namespace capax {

namespace {

using nlohmann::json;

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::InvalidDomain, std::string("missing field '") + key + "'");
  if (!j.at(key).is_number())
    throw Error(ErrorKind::InvalidDomain, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::InvalidDomain, std::string("missing field '") + key + "'");
  if (!j.at(key).is_number_integer())
    throw Error(ErrorKind::InvalidDomain, std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

DomainSpec parse_domain_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Usage, std::string("malformed domain JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidDomain, "domain spec must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorKind::InvalidDomain, "domain spec needs a string 'kind'");

  DomainSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ball") {
    spec.kind = Ball{number(j, "radius")};
  } else if (kind == "ellipsoid") {
    spec.kind = Ellipsoid{number(j, "a"), number(j, "b"), number(j, "c")};
  } else if (kind == "perturbed_sphere") {
    PerturbedSphere p;
    p.base_radius = number(j, "base_radius");
    if (j.contains("harmonics")) {
      if (!j.at("harmonics").is_array())
        throw Error(ErrorKind::InvalidDomain, "'harmonics' must be an array");
      for (const auto& h : j.at("harmonics"))
        p.harmonics.push_back({integer(h, "l"), integer(h, "m"), number(h, "amplitude")});
    }
    spec.kind = std::move(p);
  } else {
    throw Error(ErrorKind::InvalidDomain, "unknown domain kind '" + kind + "'");
  }
  if (j.contains("dimension")) spec.dimension = integer(j, "dimension");
  if (j.contains("center")) {
    const auto& c = j.at("center");
    if (!c.is_array() || c.size() != 3)
      throw Error(ErrorKind::InvalidDomain, "'center' must be an array of 3 numbers");
    for (int i = 0; i < 3; ++i) {
      if (!c[i].is_number()) throw Error(ErrorKind::InvalidDomain, "'center' entries must be numbers");
      spec.center[i] = c[i].get<double>();
    }
  }
  if (j.contains("name") && j.at("name").is_string()) spec.name = j.at("name").get<std::string>();
  if (spec.name.empty()) spec.name = kind;
  validate(spec);
  return spec;
}

DomainSpec load_domain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open domain file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain_spec(ss.str());
}

std::string domain_spec_to_json(const DomainSpec& spec) {
  json j;
  j["kind"] = kind_name(spec);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          j["radius"] = k.radius;
        } else if constexpr (std::is_same_v<K, Ellipsoid>) {
          j["a"] = k.a;
          j["b"] = k.b;
          j["c"] = k.c;
        } else {
          j["base_radius"] = k.base_radius;
          json hs = json::array();
          for (const auto& h : k.harmonics) hs.push_back({{"l", h.degree}, {"m", h.order}, {"amplitude", h.amplitude}});
          j["harmonics"] = hs;
        }
      },
      spec.kind);
  j["dimension"] = spec.dimension;
  j["center"] = {spec.center.x(), spec.center.y(), spec.center.z()};
  j["name"] = spec.name;
  return j.dump();
}

std::string SurfaceMesh::to_off() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "OFF\n" << vertices_.size() << ' ' << panels_.size() << " 0\n";
  for (const auto& v : vertices_) os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& p : panels_) os << "3 " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  return os.str();
}

}  // namespace capax
