#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <capax/bem.hpp>
#include <capax/field.hpp>
#include <capax/geometry.hpp>

namespace capax::testing {

inline DomainSpec ball_spec(double radius = 1.0) {
  DomainSpec s;
  s.kind = Ball{radius};
  s.name = "ball";
  return s;
}

inline DomainSpec ellipsoid_spec(double a = 2.0, double b = 1.0, double c = 1.0) {
  DomainSpec s;
  s.kind = Ellipsoid{a, b, c};
  s.name = "ellipsoid";
  return s;
}

inline DomainSpec perturbed_spec(double amplitude = 0.05, int l = 2, int m = 0) {
  DomainSpec s;
  s.kind = PerturbedSphere{1.0, {{l, m, amplitude}}};
  s.name = "perturbed";
  return s;
}

/// Solutions are cached per test binary; BEM solves dominate test time.
inline const BemSolution& solved(const DomainSpec& spec, int level) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<BemSolution>> cache;
  const std::string key = domain_spec_to_json(spec) + "#" + std::to_string(level);
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    auto mesh = std::make_shared<const SurfaceMesh>(build_mesh(spec, level));
    slot = std::make_unique<BemSolution>(assemble_and_solve(mesh));
  }
  return *slot;
}

inline std::shared_ptr<const BemField> field_of(const DomainSpec& spec, int level) {
  return std::make_shared<const BemField>(solved(spec, level));
}

}  // namespace capax::testing
