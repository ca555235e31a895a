#pragma once

#include <map>
#include <string>
#include <vector>

#include "dirac/integrator.hpp"

namespace dirac {

using Params = std::map<std::string, double>;

enum class Bound { Positive, NonNegative, Any };

struct ParamSpec {
  std::string name;
  double default_value;
  Bound bound;
  std::string description;
};

struct SystemTemplate {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  /// Where the model comes from and what it should exhibit.
  std::string reference;
  Index config_dim = 0;
  /// Dimension of the configuration constraint kernel at a generic point.
  Index constraint_kernel_dim = 0;
  /// Momentum components identically zero because L does not depend on them.
  std::vector<Index> degenerate_momenta;
  std::vector<double> q0;
  std::vector<double> v0;
  double h = 0.01;
  double t_final = 10.0;
  Scheme scheme = Scheme::ImplicitMidpoint;
  /// False when the system cannot be written with polynomial terms and
  /// constant rows (exports as a builtin reference only).
  bool polynomial = true;
};

const std::vector<SystemTemplate>& list_builtins();
/// Throws std::invalid_argument for an unknown name.
const SystemTemplate& find_builtin(const std::string& name);
/// Defaults filled in, unknown names and out-of-range values rejected.
Params resolve_params(const std::string& name, const Params& given);
LagrangeDiracSystem build_builtin(const std::string& name, const Params& params = {});

}  // namespace dirac
