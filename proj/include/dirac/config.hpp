#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/systems.hpp"
#include "json.hpp"

namespace dirac {

/// Constraint rows in a config file: constant rows, or rows affine in q.
struct RowSpec {
  bool affine = false;
  Matrix constant;
  std::vector<AffineRow> affine_rows;

  Index count() const;
  DistributionField field(Index n) const;
};

struct CustomSubsystem {
  Index dim = 0;
  RowSpec constraints;
};

struct CustomSystem {
  Index dimension = 0;
  std::vector<CustomSubsystem> subsystems;
  std::vector<PolyTerm> lagrangian;
  std::vector<ForceTerm> forces;
  RowSpec coupling;
};

struct SystemSpec {
  std::optional<std::string> builtin;
  Params params;
  std::optional<CustomSystem> custom;
};

struct OutputSpec {
  std::optional<std::string> path;
  std::vector<std::string> fields;
};

struct SimulationConfig {
  SystemSpec system;
  std::optional<IntegratorConfig> integrator;
  std::optional<double> t_final;
  std::optional<std::vector<double>> q0;
  std::optional<std::vector<double>> v0;
  OutputSpec output;
};

/// Field groups accepted in output.fields, in CSV order.
const std::vector<std::string>& output_field_names();

/// Validates against the schema; throws ConfigError naming the offending path.
SimulationConfig parse_config(const nlohmann::json& doc);
SimulationConfig load_config(const std::string& path);

LagrangeDiracSystem build_system(const SystemSpec& spec);
/// Template defaults for builtins, nullptr for custom systems.
const SystemTemplate* template_for(const SystemSpec& spec);

/// Config document for a builtin with its defaults. With `as_custom`, the
/// system is written out as polynomial terms and constraint rows.
nlohmann::json export_builtin(const std::string& name, const Params& params, bool as_custom);

}  // namespace dirac
