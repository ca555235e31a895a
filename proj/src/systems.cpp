#include "dirac/systems.hpp"

#include <cmath>
#include <functional>
#include <initializer_list>
#include <utility>

#include "dirac/rolling_ball.hpp"

namespace dirac {

namespace {

using Powers = std::initializer_list<std::pair<int, int>>;

PolyTerm term(double coeff, int n, Powers q, Powers v) {
  PolyTerm t{coeff, std::vector<int>(n, 0), std::vector<int>(n, 0)};
  for (auto [i, e] : q) t.q_exps[i] += e;
  for (auto [i, e] : v) t.v_exps[i] += e;
  return t;
}

ForceTerm force_term(int component, double coeff, int n, Powers q, Powers v) {
  ForceTerm t{component, coeff, std::vector<int>(n, 0), std::vector<int>(n, 0)};
  for (auto [i, e] : q) t.q_exps[i] += e;
  for (auto [i, e] : v) t.v_exps[i] += e;
  return t;
}

Matrix row(std::initializer_list<double> entries) {
  Matrix m(1, static_cast<Index>(entries.size()));
  Index j = 0;
  for (double x : entries) m(0, j++) = x;
  return m;
}

LagrangeDiracSystem assemble(std::string name, int n, std::vector<PolyTerm> lag,
                             std::vector<ForceTerm> forces, std::vector<DistributionField> subs,
                             DistributionField coupling) {
  LagrangeDiracSystem sys{std::move(name), LagrangianModel::polynomial(n, std::move(lag)),
                          ForceField::polynomial(n, std::move(forces)),
                          InterconnectionSpec(std::move(subs), std::move(coupling)), {}};
  sys.check();
  return sys;
}

LagrangeDiracSystem harmonic(const Params& p) {
  return assemble("harmonic", 1,
                  {term(0.5 * p.at("m"), 1, {}, {{0, 2}}), term(-0.5 * p.at("k"), 1, {{0, 2}}, {})},
                  {}, {DistributionField::unconstrained(1)}, DistributionField::unconstrained(1));
}

LagrangeDiracSystem damped(const Params& p) {
  auto sys = assemble(
      "damped", 1,
      {term(0.5 * p.at("m"), 1, {}, {{0, 2}}), term(-0.5 * p.at("k"), 1, {{0, 2}}, {})},
      {force_term(0, -p.at("r"), 1, {}, {{0, 1}})}, {DistributionField::unconstrained(1)},
      DistributionField::unconstrained(1));
  return sys;
}

// Coordinates (x1, x2, xb2, x3): masses 1 and 2 with springs 1 and 2 form
// the first subsystem, the massless end xb2 with spring 3 and mass 3 the second.
LagrangeDiracSystem mass_spring(const Params& p) {
  const double m1 = p.at("m1"), m2 = p.at("m2"), m3 = p.at("m3");
  const double k1 = p.at("k1"), k2 = p.at("k2"), k3 = p.at("k3");
  std::vector<PolyTerm> lag{
      term(0.5 * m1, 4, {}, {{0, 2}}),         term(0.5 * m2, 4, {}, {{1, 2}}),
      term(-0.5 * k1, 4, {{0, 2}}, {}),        term(-0.5 * k2, 4, {{1, 2}}, {}),
      term(k2, 4, {{0, 1}, {1, 1}}, {}),       term(-0.5 * k2, 4, {{0, 2}}, {}),
      term(0.5 * m3, 4, {}, {{3, 2}}),         term(-0.5 * k3, 4, {{3, 2}}, {}),
      term(k3, 4, {{2, 1}, {3, 1}}, {}),       term(-0.5 * k3, 4, {{2, 2}}, {})};
  return assemble("mass-spring", 4, std::move(lag), {},
                  {DistributionField::unconstrained(2), DistributionField::unconstrained(2)},
                  DistributionField::constant(row({0, 1, -1, 0})));
}

// Coordinates (q_R, q_L, q_S1, q_S2, q_C). The capacitor stores energy
// q_C^2 / (2C), entering L with a minus sign like any potential.
LagrangeDiracSystem circuit(const std::string& name, double r, double l, double c) {
  std::vector<ForceTerm> forces;
  if (r != 0.0) forces.push_back(force_term(0, -r, 5, {}, {{0, 1}}));
  return assemble(name, 5,
                  {term(0.5 * l, 5, {}, {{1, 2}}), term(-0.5 / c, 5, {{4, 2}}, {})},
                  std::move(forces),
                  {DistributionField::constant(row({1, -1, 1})),
                   DistributionField::constant(row({-1, 1}))},
                  DistributionField::constant(row({0, 0, 1, -1, 0})));
}

LagrangeDiracSystem rlc(const Params& p) { return circuit("rlc", p.at("R"), p.at("L"), p.at("C")); }
LagrangeDiracSystem lc(const Params& p) { return circuit("lc", 0.0, p.at("L"), p.at("C")); }

// Resistor, inductor and port S1 with a prescribed port effort f_S1.
LagrangeDiracSystem circuit_1(const Params& p) {
  std::vector<ForceTerm> forces{force_term(0, -p.at("R"), 3, {}, {{0, 1}})};
  if (p.at("f_S1") != 0.0) forces.push_back(force_term(2, p.at("f_S1"), 3, {}, {}));
  return assemble("circuit-1", 3, {term(0.5 * p.at("L"), 3, {}, {{1, 2}})}, std::move(forces),
                  {DistributionField::constant(row({1, -1, 1}))},
                  DistributionField::unconstrained(3));
}

// Port S2 and capacitor with a prescribed port effort f_S2.
LagrangeDiracSystem circuit_2(const Params& p) {
  std::vector<ForceTerm> forces;
  if (p.at("f_S2") != 0.0) forces.push_back(force_term(0, -p.at("f_S2"), 2, {}, {}));
  return assemble("circuit-2", 2, {term(-0.5 / p.at("C"), 2, {{1, 2}}, {})}, std::move(forces),
                  {DistributionField::constant(row({-1, 1}))},
                  DistributionField::unconstrained(2));
}

LagrangeDiracSystem rolling_ball(const Params& p) {
  return build_rolling_ball({p.at("I1"), p.at("I2"), p.at("rho"), p.at("tau")});
}

struct Entry {
  SystemTemplate tmpl;
  std::function<LagrangeDiracSystem(const Params&)> build;
};

std::vector<Entry> make_entries() {
  std::vector<Entry> e;
  {
    SystemTemplate t;
    t.name = "harmonic";
    t.summary = "harmonic oscillator, L = m v^2/2 - k q^2/2";
    t.params = {{"m", 1.0, Bound::Positive, "mass"}, {"k", 1.0, Bound::Positive, "stiffness"}};
    t.reference = "canonical structure on T*R; q_dot = v, p_dot = -q for m = k = 1";
    t.config_dim = 1;
    t.constraint_kernel_dim = 1;
    t.q0 = {1.0};
    t.v0 = {0.0};
    e.push_back({t, harmonic});
  }
  {
    SystemTemplate t;
    t.name = "damped";
    t.summary = "harmonic oscillator with linear damping force -r v dq";
    t.params = {{"m", 1.0, Bound::Positive, "mass"},
                {"k", 1.0, Bound::Positive, "stiffness"},
                {"r", 0.5, Bound::NonNegative, "damping coefficient"}};
    t.reference = "p_dot + q + r v = 0; dE/dt = -r v^2";
    t.config_dim = 1;
    t.constraint_kernel_dim = 1;
    t.q0 = {1.0};
    t.v0 = {0.0};
    e.push_back({t, damped});
  }
  {
    SystemTemplate t;
    t.name = "mass-spring";
    t.summary = "two mass-spring subsystems joined at x2 = xb2";
    t.params = {{"m1", 1.0, Bound::Positive, "mass 1"}, {"m2", 1.0, Bound::Positive, "mass 2"},
                {"m3", 1.0, Bound::Positive, "mass 3"}, {"k1", 1.0, Bound::Positive, "spring 1"},
                {"k2", 1.0, Bound::Positive, "spring 2"}, {"k3", 1.0, Bound::Positive, "spring 3"}};
    t.reference = "coordinates (x1, x2, xb2, x3); coupling dx2 - dxb2; pb2 = 0; f2 + fb2 = 0";
    t.config_dim = 4;
    t.constraint_kernel_dim = 3;
    t.degenerate_momenta = {2};
    t.q0 = {0.5, 0.0, 0.0, -0.5};
    t.v0 = {0.0, 0.0, 0.0, 0.0};
    t.h = 1e-3;
    e.push_back({t, mass_spring});
  }
  {
    SystemTemplate t;
    t.name = "rlc";
    t.summary = "parallel R-L-C circuit from two primitive circuits joined at ports S1, S2";
    t.params = {{"R", 1.0, Bound::NonNegative, "resistance"},
                {"L", 1.0, Bound::Positive, "inductance"},
                {"C", 1.0, Bound::Positive, "capacitance"}};
    t.reference =
        "coordinates (q_R, q_L, q_S1, q_S2, q_C); KCL v_R - v_L + v_S1 = 0, v_C - v_S2 = 0; "
        "coupling v_S1 = v_S2; dE/dt = -R v_R^2";
    t.config_dim = 5;
    t.constraint_kernel_dim = 2;
    t.degenerate_momenta = {0, 2, 3, 4};
    t.q0 = {0.0, 0.0, 0.0, 0.0, 1.0};
    t.v0 = {0.0, 0.0, 0.0, 0.0, 0.0};
    t.h = 1e-3;
    e.push_back({t, rlc});
  }
  {
    SystemTemplate t;
    t.name = "lc";
    t.summary = "the rlc circuit with R = 0";
    t.params = {{"L", 1.0, Bound::Positive, "inductance"},
                {"C", 1.0, Bound::Positive, "capacitance"}};
    t.reference =
        "without the resistor the capacitor is shorted: q_C stays 0 and the inductor "
        "current is constant; E is conserved";
    t.config_dim = 5;
    t.constraint_kernel_dim = 2;
    t.degenerate_momenta = {0, 2, 3, 4};
    t.q0 = {0.0, 0.0, 0.0, 0.0, 0.0};
    t.v0 = {1.0, 1.0, 0.0, 0.0, 0.0};
    e.push_back({t, lc});
  }
  {
    SystemTemplate t;
    t.name = "circuit-1";
    t.summary = "primitive circuit with resistor, inductor and port S1 driven by effort f_S1";
    t.params = {{"R", 1.0, Bound::Positive, "resistance"},
                {"L", 1.0, Bound::Positive, "inductance"},
                {"f_S1", 0.0, Bound::Any, "port effort"}};
    t.reference = "coordinates (q_R, q_L, q_S1); F = -R v_R dq_R + f_S1 dq_S1";
    t.config_dim = 3;
    t.constraint_kernel_dim = 2;
    t.degenerate_momenta = {0, 2};
    t.q0 = {0.0, 0.0, 0.0};
    t.v0 = {0.0, 1.0, 1.0};
    e.push_back({t, circuit_1});
  }
  {
    SystemTemplate t;
    t.name = "circuit-2";
    t.summary = "primitive circuit with port S2 and capacitor driven by effort f_S2";
    t.params = {{"C", 1.0, Bound::Positive, "capacitance"},
                {"f_S2", 0.0, Bound::Any, "port effort"}};
    t.reference = "coordinates (q_S2, q_C); F = -f_S2 dq_S2; consistent only for q_C = -C f_S2";
    t.config_dim = 2;
    t.constraint_kernel_dim = 1;
    t.degenerate_momenta = {0, 1};
    t.q0 = {0.0, 0.0};
    t.v0 = {0.0, 0.0};
    e.push_back({t, circuit_2});
  }
  {
    SystemTemplate t;
    t.name = "rolling-ball";
    t.summary = "ball rolling without slipping on table 2, geared to torque-driven table 1";
    t.params = {{"I1", 1.0, Bound::Positive, "inertia of table 1"},
                {"I2", 1.0, Bound::Positive, "inertia of table 2"},
                {"rho", 1.0, Bound::Positive, "ball density (unit radius)"},
                {"tau", 0.1, Bound::Any, "torque on table 1"}};
    t.reference =
        "coordinates (s1, s2, theta_1..3, u_1..3); u3_dot = 0; s1_dot + s2_dot = 0; "
        "contact velocity matches table 2; L = I1/2 s1_dot^2 + I2/2 s2_dot^2 + "
        "m3/2 (tr(R_dot^T R_dot) + |u_dot|^2), m3 = 4 pi rho / 3";
    t.config_dim = 8;
    t.constraint_kernel_dim = 4;
    t.q0 = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    t.v0 = {0.5, -0.5, 0.2, 0.1, 0.3, 0.0, 0.0, 0.0};
    t.h = 1e-3;
    t.t_final = 1.0;
    t.polynomial = false;
    e.push_back({t, rolling_ball});
  }
  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = make_entries();
  return e;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : entries()) {
    if (e.tmpl.name == name) return e;
  }
  std::string known;
  for (const auto& e : entries()) known += (known.empty() ? "" : ", ") + e.tmpl.name;
  throw std::invalid_argument("unknown builtin system '" + name + "' (known: " + known + ")");
}

}  // namespace

const std::vector<SystemTemplate>& list_builtins() {
  static const std::vector<SystemTemplate> t = [] {
    std::vector<SystemTemplate> out;
    for (const auto& e : entries()) out.push_back(e.tmpl);
    return out;
  }();
  return t;
}

const SystemTemplate& find_builtin(const std::string& name) { return find_entry(name).tmpl; }

Params resolve_params(const std::string& name, const Params& given) {
  const SystemTemplate& t = find_builtin(name);
  Params out;
  for (const auto& [key, value] : given) {
    bool known = false;
    for (const auto& spec : t.params) known = known || spec.name == key;
    if (!known) throw std::invalid_argument(name + ": unknown parameter '" + key + "'");
  }
  for (const auto& spec : t.params) {
    auto it = given.find(spec.name);
    const double x = it == given.end() ? spec.default_value : it->second;
    if (!std::isfinite(x)) throw std::invalid_argument(name + ": " + spec.name + " is not finite");
    if (spec.bound == Bound::Positive && !(x > 0.0)) {
      throw std::invalid_argument(name + ": " + spec.name + " must be > 0");
    }
    if (spec.bound == Bound::NonNegative && !(x >= 0.0)) {
      throw std::invalid_argument(name + ": " + spec.name + " must be >= 0");
    }
    out[spec.name] = x;
  }
  return out;
}

LagrangeDiracSystem build_builtin(const std::string& name, const Params& params) {
  return find_entry(name).build(resolve_params(name, params));
}

}  // namespace dirac
