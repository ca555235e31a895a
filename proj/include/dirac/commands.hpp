#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitIntegration = 3,
};

struct SimulateOverrides {
  std::optional<double> h;
  std::optional<double> t_final;
  std::optional<std::string> scheme;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

int cmd_verify(const std::string& config_path, std::uint64_t seed, std::ostream& out,
               std::ostream& err);
int cmd_simulate(const std::string& config_path, const SimulateOverrides& overrides,
                 std::ostream& out, std::ostream& err);
/// `point` holds (q, p); zeros when absent.
int cmd_compose(const std::string& config_path, const std::optional<std::vector<double>>& point,
                std::ostream& out, std::ostream& err);
int cmd_list(std::ostream& out);
int cmd_export(const std::string& name, bool as_custom, std::ostream& out, std::ostream& err);
int cmd_selftest(std::uint64_t seed, std::ostream& out, std::ostream& err);

inline constexpr std::uint64_t kDefaultSeed = 20240917;

}  // namespace dirac
