#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <capax/bem.hpp>
#include <capax/geometry.hpp>
#include <capax/verify.hpp>

namespace capax::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kNumerical = 3 };

struct RunConfig {
  DomainSpec domain;
  int mesh_level = 4;
  std::vector<double> p_values = {2.0, 3.0};
  std::vector<double> t_grid = VerifyOptions{}.t_grid;
  std::map<std::string, double> tolerances;  // "slack"
  std::filesystem::path output = ".";
  std::uint64_t seed = 1;
};

/// Throws Error(Usage) when the config breaks its invariants.
void check_config(const RunConfig& config);

VerifyOptions verify_options(const RunConfig& config);

/// Comma separated reals; throws Error(Usage) on junk.
std::vector<double> parse_reals(const std::string& csv);

std::string capacity_json(const BemSolution& sol, const CapacityRoutes& routes);
std::string phi_identity_csv(const std::vector<PhiIdentity>& rows);

int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_curves(const RunConfig& config, std::ostream& log);
int cmd_report(const RunConfig& config, std::ostream& log);

/// Full command line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace capax::cli
