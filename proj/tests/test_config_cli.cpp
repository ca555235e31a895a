#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirac/commands.hpp"
#include "dirac/config.hpp"
#include "dirac/errors.hpp"

namespace dirac {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kConfigs = DIRAC_CONFIG_DIR;

// Parses a config and returns the error message, empty when it is valid.
std::string parse_error(const std::string& text) {
  try {
    parse_config(json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::out_of_range("no column " + name);
  }
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (csv.header.empty()) {
      csv.header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::stod(c));
    csv.rows.push_back(row);
  }
  return csv;
}

std::string simulate_to_string(const std::string& config, SimulateOverrides ov = {}) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(config, ov, out, err), kExitOk) << err.str();
  return out.str();
}

TEST(Parse, MinimalBuiltin) {
  const SimulationConfig c = parse_config(json::parse(R"({"system": {"builtin": "harmonic"}})"));
  ASSERT_TRUE(c.system.builtin.has_value());
  EXPECT_EQ(*c.system.builtin, "harmonic");
  EXPECT_FALSE(c.integrator.has_value());
}

TEST(Parse, ErrorsNameTheOffendingPath) {
  EXPECT_NE(parse_error(R"({"system": {"builtin": "harmonic"}, "extra": 1})").find("config.extra"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"integrator": {"h": 0.1}})").find("config.system"), std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"builtin": "harmonic"}, "integrator": {"h": -1}})")
                .find("integrator.h"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"builtin": "harmonic"}, "integrator": {"scheme": "rk4"}})")
                .find("integrator.scheme"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"builtin": "harmonic", "custom": {}}})").find("system"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"builtin": "harmonic"}, "output": {"fields": ["q", "x"]}})")
                .find("output.fields"),
            std::string::npos);
}

TEST(Parse, CustomShapeErrors) {
  const std::string base =
      R"({"system": {"custom": {"dimension": 2, "subsystems": [{"dim": 1}, {"dim": 1}],
         "lagrangian": [{"coeff": 0.5, "q_exps": [0, 0], "v_exps": [2, 0]}])";
  EXPECT_EQ(parse_error(base + "}}}"), "");
  EXPECT_NE(parse_error(base + R"(, "coupling": {"constant": [[1, -1, 0]]}}}})").find("system.custom.coupling"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"custom": {"dimension": 2, "subsystems": [{"dim": 1}],
         "lagrangian": []}}})")
                .find("system.custom.subsystems"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"custom": {"dimension": 1,
         "lagrangian": [{"coeff": 1, "q_exps": [0, 1], "v_exps": [2]}]}}})")
                .find("q_exps"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"system": {"custom": {"dimension": 1,
         "lagrangian": [{"coeff": 1, "q_exps": [-1], "v_exps": [2]}]}}})")
                .find("exponent"),
            std::string::npos);
}

TEST(Parse, UnknownBuiltinParameterRejectedOnLoad) {
  const fs::path p = fs::temp_directory_path() / "dirac-bad-param.json";
  std::ofstream(p) << R"({"system": {"builtin": "harmonic", "params": {"mass": 2}}})";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(p.string(), kDefaultSeed, out, err), kExitUsage);
  EXPECT_NE(err.str().find("mass"), std::string::npos);
  fs::remove(p);
}

TEST(Configs, ShippedFilesLoadAndBuild) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".json") continue;
    const SimulationConfig c = load_config(entry.path().string());
    EXPECT_NO_THROW(build_system(c.system)) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 8);
}

TEST(Export, CustomFormRebuildsTheSameSystem) {
  for (const auto& t : list_builtins()) {
    if (!t.polynomial) continue;
    const json doc = export_builtin(t.name, {}, true);
    const SimulationConfig c = parse_config(doc);
    ASSERT_TRUE(c.system.custom.has_value()) << t.name;
    const LagrangeDiracSystem a = build_builtin(t.name), b = build_system(c.system);
    ASSERT_EQ(a.config_dim(), b.config_dim());
    ASSERT_EQ(a.multiplier_count(), b.multiplier_count());
    const Index n = a.config_dim();
    const Vector q = Vector::LinSpaced(n, -0.7, 0.9), v = Vector::LinSpaced(n, 0.3, -0.4);
    const Vector p = a.lagrangian.grad_v(q, v);
    EXPECT_NEAR(a.lagrangian.value(q, v), b.lagrangian.value(q, v), 1e-14) << t.name;
    EXPECT_LT((a.force(q, v, p) - b.force(q, v, p)).norm(), 1e-14) << t.name;
    EXPECT_LT((a.constraints.stacked_constraints(q) - b.constraints.stacked_constraints(q)).norm(),
              1e-14)
        << t.name;
  }
}

TEST(Export, BuiltinReferenceRoundTrips) {
  const json doc = export_builtin("rolling-ball", {{"tau", 0.0}}, false);
  const SimulationConfig c = parse_config(doc);
  EXPECT_EQ(*c.system.builtin, "rolling-ball");
  EXPECT_EQ(c.system.params.at("tau"), 0.0);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_export("rolling-ball", true, out, err), kExitUsage);
  EXPECT_EQ(cmd_export("nope", false, out, err), kExitUsage);
}

TEST(Verify, HarmonicIsCanonical) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify((kConfigs / "harmonic.json").string(), kDefaultSeed, out, err), kExitOk);
  EXPECT_NE(out.str().find("canonical structure, rank 2"), std::string::npos) << out.str();
}

TEST(Verify, CircuitReportsKernelDimension) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify((kConfigs / "rlc.json").string(), kDefaultSeed, out, err), kExitOk);
  EXPECT_NE(out.str().find("constraint kernel dim 2"), std::string::npos) << out.str();
}

TEST(Verify, MissingFileIsUsageError) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("/nonexistent/config.json", kDefaultSeed, out, err), kExitUsage);
}

TEST(Compose, MassSpringAtOrigin) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compose((kConfigs / "mass-spring.json").string(), std::nullopt, out, err), kExitOk);
  EXPECT_NE(out.str().find("dimension 8"), std::string::npos);
  EXPECT_NE(out.str().find("dq_1 - dq_2"), std::string::npos) << out.str();
}

TEST(Compose, UnconstrainedIsCanonical) {
  const fs::path p = fs::temp_directory_path() / "dirac-free2.json";
  std::ofstream(p) << R"({"system": {"custom": {"dimension": 2, "lagrangian": [
      {"coeff": 0.5, "q_exps": [0, 0], "v_exps": [2, 0]},
      {"coeff": 0.5, "q_exps": [0, 0], "v_exps": [0, 2]}]}}})";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compose(p.string(), std::nullopt, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("canonical structure"), std::string::npos) << out.str();
  fs::remove(p);
}

TEST(Compose, CircuitVelocityProjection) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compose((kConfigs / "rlc.json").string(), std::nullopt, out, err), kExitOk);
  EXPECT_NE(out.str().find("configuration velocity projection dim 2"), std::string::npos);
}

TEST(Compose, WrongPointLength) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compose((kConfigs / "harmonic.json").string(), std::vector<double>{1, 2, 3}, out, err),
            kExitUsage);
}

TEST(Simulate, HarmonicCsv) {
  const Csv csv = parse_csv(simulate_to_string((kConfigs / "harmonic.json").string()));
  ASSERT_EQ(csv.rows.size(), 1001u);
  const auto& last = csv.rows.back();
  EXPECT_NEAR(last[csv.column("t")], 10.0, 1e-12);
  EXPECT_NEAR(last[csv.column("q_0")], std::cos(10.0), 1e-3);
}

TEST(Simulate, DampedEnergyNonIncreasing) {
  const Csv csv = parse_csv(simulate_to_string((kConfigs / "damped.json").string()));
  const std::size_t e = csv.column("E");
  for (std::size_t k = 1; k < csv.rows.size(); ++k) EXPECT_LE(csv.rows[k][e], csv.rows[k - 1][e]);
}

TEST(Simulate, MassSpringConstraintColumn) {
  const Csv csv = parse_csv(simulate_to_string((kConfigs / "mass-spring.json").string()));
  const std::size_t c = csv.column("constraint_residual_max");
  for (const auto& row : csv.rows) EXPECT_LE(row[c], 1e-8);
}

TEST(Simulate, OverridesApply) {
  SimulateOverrides ov;
  ov.h = 0.1;
  ov.t_final = 1.0;
  ov.scheme = "backward-euler";
  const Csv csv = parse_csv(simulate_to_string((kConfigs / "harmonic.json").string(), ov));
  EXPECT_EQ(csv.rows.size(), 11u);
  ov.scheme = "leapfrog";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate((kConfigs / "harmonic.json").string(), ov, out, err), kExitUsage);
}

TEST(Simulate, OutputFieldSelection) {
  const fs::path p = fs::temp_directory_path() / "dirac-fields.json";
  std::ofstream(p) << R"({"system": {"builtin": "harmonic"}, "integrator": {"h": 0.5, "t_final": 1},
                         "output": {"fields": ["t", "q", "E"]}})";
  const Csv csv = parse_csv(simulate_to_string(p.string()));
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "q_0", "E"}));
  fs::remove(p);
}

TEST(Simulate, ByteIdenticalAcrossRuns) {
  const std::string a = simulate_to_string((kConfigs / "rlc.json").string());
  const std::string b = simulate_to_string((kConfigs / "rlc.json").string());
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(Simulate, IntegrationFailureExitsThree) {
  // L = 0 under a constant force has no consistent step; the first one fails.
  const fs::path p = fs::temp_directory_path() / "dirac-empty.json";
  std::ofstream(p) << R"({"system": {"custom": {"dimension": 1, "lagrangian": [],
                         "forces": [{"component": 0, "coeff": 1, "q_exps": [0], "v_exps": [0]}]}},
                         "integrator": {"h": 0.1, "t_final": 1}, "initial": {"q0": [0], "v0": [1]}})";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(p.string(), {}, out, err), kExitIntegration);
  EXPECT_NE(out.str().find("# integration failure"), std::string::npos);
  fs::remove(p);
}

TEST(Selftest, DefaultSeedPasses) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_selftest(kDefaultSeed, out, err), kExitOk) << out.str();
}

TEST(List, NamesEveryBuiltin) {
  std::ostringstream out;
  EXPECT_EQ(cmd_list(out), kExitOk);
  for (const auto& t : list_builtins()) EXPECT_NE(out.str().find(t.name), std::string::npos);
}

}  // namespace
}  // namespace dirac
