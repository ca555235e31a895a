#include "dirac/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dirac/errors.hpp"

namespace dirac {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  expect_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

long get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_vector(const json& j, const std::string& path,
                               std::optional<Index> len = std::nullopt) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  if (len && static_cast<Index>(out.size()) != *len) {
    fail(path, "expected " + std::to_string(*len) + " entries, got " + std::to_string(out.size()));
  }
  return out;
}

std::vector<int> get_exponents(const json& j, const std::string& path, Index n) {
  if (!j.is_array()) fail(path, "expected an array of exponents");
  if (static_cast<Index>(j.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " exponents, got " + std::to_string(j.size()));
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const long e = get_int(j[i], path + "[" + std::to_string(i) + "]");
    if (e < 0) fail(path + "[" + std::to_string(i) + "]", "exponent must be >= 0");
    out.push_back(static_cast<int>(e));
  }
  return out;
}

Matrix get_matrix(const json& j, const std::string& path, Index cols) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  Matrix m(static_cast<Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto r = get_vector(j[i], path + "[" + std::to_string(i) + "]", cols);
    for (Index c = 0; c < cols; ++c) m(static_cast<Index>(i), c) = r[static_cast<std::size_t>(c)];
  }
  return m;
}

Vector to_eigen(const std::vector<double>& x) {
  return Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size()));
}

RowSpec parse_rows(const json& j, const std::string& path, Index n) {
  check_keys(j, {"constant", "affine"}, path);
  if (j.size() != 1) fail(path, "expected exactly one of 'constant' or 'affine'");
  RowSpec r;
  if (j.contains("constant")) {
    r.constant = get_matrix(j["constant"], path + ".constant", n);
    return r;
  }
  r.affine = true;
  const json& rows = j["affine"];
  if (!rows.is_array()) fail(path + ".affine", "expected an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string p = path + ".affine[" + std::to_string(i) + "]";
    check_keys(rows[i], {"constant", "linear_in_q"}, p);
    if (!rows[i].contains("constant")) fail(p + ".constant", "missing");
    AffineRow row{to_eigen(get_vector(rows[i]["constant"], p + ".constant", n)),
                  Matrix::Zero(n, n)};
    if (rows[i].contains("linear_in_q")) {
      row.linear_in_q = get_matrix(rows[i]["linear_in_q"], p + ".linear_in_q", n);
      if (row.linear_in_q.rows() != n) {
        fail(p + ".linear_in_q", "expected " + std::to_string(n) + " rows");
      }
    }
    r.affine_rows.push_back(std::move(row));
  }
  return r;
}

CustomSystem parse_custom(const json& j, const std::string& path) {
  check_keys(j, {"dimension", "subsystems", "lagrangian", "forces", "coupling"}, path);
  CustomSystem c;
  if (!j.contains("dimension")) fail(path + ".dimension", "missing");
  const long dim = get_int(j["dimension"], path + ".dimension");
  if (dim < 1) fail(path + ".dimension", "must be >= 1");
  c.dimension = dim;
  const Index n = c.dimension;

  if (j.contains("subsystems")) {
    const json& subs = j["subsystems"];
    if (!subs.is_array() || subs.empty()) fail(path + ".subsystems", "expected a non-empty array");
    Index total = 0;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string p = path + ".subsystems[" + std::to_string(i) + "]";
      check_keys(subs[i], {"dim", "constraints"}, p);
      if (!subs[i].contains("dim")) fail(p + ".dim", "missing");
      const long d = get_int(subs[i]["dim"], p + ".dim");
      if (d < 1) fail(p + ".dim", "must be >= 1");
      CustomSubsystem s;
      s.dim = d;
      if (subs[i].contains("constraints")) s.constraints = parse_rows(subs[i]["constraints"], p + ".constraints", d);
      else s.constraints.constant = Matrix(0, d);
      total += s.dim;
      c.subsystems.push_back(std::move(s));
    }
    if (total != n) {
      fail(path + ".subsystems", "subsystem dimensions sum to " + std::to_string(total) +
                                     " but dimension is " + std::to_string(n));
    }
  } else {
    c.subsystems.push_back({n, RowSpec{false, Matrix(0, n), {}}});
  }

  if (!j.contains("lagrangian")) fail(path + ".lagrangian", "missing");
  const json& lag = j["lagrangian"];
  if (!lag.is_array()) fail(path + ".lagrangian", "expected an array of terms");
  for (std::size_t i = 0; i < lag.size(); ++i) {
    const std::string p = path + ".lagrangian[" + std::to_string(i) + "]";
    check_keys(lag[i], {"coeff", "q_exps", "v_exps"}, p);
    for (const char* k : {"coeff", "q_exps", "v_exps"}) {
      if (!lag[i].contains(k)) fail(p + "." + k, "missing");
    }
    c.lagrangian.push_back({get_number(lag[i]["coeff"], p + ".coeff"),
                            get_exponents(lag[i]["q_exps"], p + ".q_exps", n),
                            get_exponents(lag[i]["v_exps"], p + ".v_exps", n)});
  }

  if (j.contains("forces")) {
    const json& f = j["forces"];
    if (!f.is_array()) fail(path + ".forces", "expected an array of terms");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string p = path + ".forces[" + std::to_string(i) + "]";
      check_keys(f[i], {"component", "coeff", "q_exps", "v_exps"}, p);
      for (const char* k : {"component", "coeff", "q_exps", "v_exps"}) {
        if (!f[i].contains(k)) fail(p + "." + k, "missing");
      }
      const long comp = get_int(f[i]["component"], p + ".component");
      if (comp < 0 || comp >= n) fail(p + ".component", "out of range");
      c.forces.push_back({comp, get_number(f[i]["coeff"], p + ".coeff"),
                          get_exponents(f[i]["q_exps"], p + ".q_exps", n),
                          get_exponents(f[i]["v_exps"], p + ".v_exps", n)});
    }
  }

  if (j.contains("coupling")) c.coupling = parse_rows(j["coupling"], path + ".coupling", n);
  else c.coupling.constant = Matrix(0, n);
  return c;
}

SystemSpec parse_system(const json& j) {
  check_keys(j, {"builtin", "params", "custom"}, "system");
  SystemSpec s;
  if (j.contains("builtin") == j.contains("custom")) {
    fail("system", "expected exactly one of 'builtin' or 'custom'");
  }
  if (j.contains("custom")) {
    if (j.contains("params")) fail("system.params", "only valid with 'builtin'");
    s.custom = parse_custom(j["custom"], "system.custom");
    return s;
  }
  s.builtin = get_string(j["builtin"], "system.builtin");
  if (j.contains("params")) {
    expect_object(j["params"], "system.params");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      s.params[it.key()] = get_number(it.value(), "system.params." + it.key());
    }
  }
  try {
    s.params = resolve_params(*s.builtin, s.params);
  } catch (const std::invalid_argument& e) {
    fail("system", e.what());
  }
  return s;
}

json rows_to_json(const DistributionField& f) {
  const auto& rows = *f.affine_rows();
  bool constant = true;
  for (const auto& r : rows) constant = constant && r.linear_in_q.isZero(0.0);
  json out;
  if (constant) {
    json m = json::array();
    for (const auto& r : rows) m.push_back(std::vector<double>(r.constant.data(), r.constant.data() + r.constant.size()));
    out["constant"] = m;
    return out;
  }
  json a = json::array();
  for (const auto& r : rows) {
    json lin = json::array();
    for (Index i = 0; i < r.linear_in_q.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(r.linear_in_q.cols()));
      for (Index k = 0; k < r.linear_in_q.cols(); ++k) row[static_cast<std::size_t>(k)] = r.linear_in_q(i, k);
      lin.push_back(row);
    }
    a.push_back({{"constant", std::vector<double>(r.constant.data(), r.constant.data() + r.constant.size())},
                 {"linear_in_q", lin}});
  }
  out["affine"] = a;
  return out;
}

}  // namespace

Index RowSpec::count() const {
  return affine ? static_cast<Index>(affine_rows.size()) : constant.rows();
}

DistributionField RowSpec::field(Index n) const {
  if (affine) return DistributionField::affine(n, affine_rows);
  if (constant.rows() == 0) return DistributionField::unconstrained(n);
  return DistributionField::constant(constant);
}

const std::vector<std::string>& output_field_names() {
  static const std::vector<std::string> names{
      "t", "q", "v", "p", "mu", "E", "power_residual", "constraint_residual_max", "newton_iters"};
  return names;
}

SimulationConfig parse_config(const json& doc) {
  check_keys(doc, {"system", "integrator", "initial", "output"}, "config");
  if (!doc.contains("system")) fail("config.system", "missing");
  SimulationConfig cfg;
  cfg.system = parse_system(doc["system"]);
  const Index n = cfg.system.custom ? cfg.system.custom->dimension
                                    : find_builtin(*cfg.system.builtin).config_dim;

  if (doc.contains("integrator")) {
    const json& j = doc["integrator"];
    check_keys(j, {"scheme", "h", "t_final", "newton_tol", "newton_max_iter"}, "integrator");
    IntegratorConfig ic;
    if (const auto* t = template_for(cfg.system)) {
      ic.h = t->h;
      ic.scheme = t->scheme;
      cfg.t_final = t->t_final;
    }
    if (j.contains("scheme")) {
      try {
        ic.scheme = parse_scheme(get_string(j["scheme"], "integrator.scheme"));
      } catch (const std::invalid_argument& e) {
        fail("integrator.scheme", e.what());
      }
    }
    if (j.contains("h")) ic.h = get_number(j["h"], "integrator.h");
    if (j.contains("t_final")) cfg.t_final = get_number(j["t_final"], "integrator.t_final");
    if (j.contains("newton_tol")) ic.newton_tol = get_number(j["newton_tol"], "integrator.newton_tol");
    if (j.contains("newton_max_iter")) {
      ic.newton_max_iter = static_cast<int>(get_int(j["newton_max_iter"], "integrator.newton_max_iter"));
    }
    if (!(ic.h > 0.0)) fail("integrator.h", "must be > 0");
    if (!(ic.newton_tol > 0.0)) fail("integrator.newton_tol", "must be > 0");
    if (ic.newton_max_iter < 1) fail("integrator.newton_max_iter", "must be >= 1");
    if (cfg.t_final && !(*cfg.t_final > 0.0)) fail("integrator.t_final", "must be > 0");
    cfg.integrator = ic;
  }

  if (doc.contains("initial")) {
    const json& j = doc["initial"];
    check_keys(j, {"q0", "v0"}, "initial");
    if (j.contains("q0")) cfg.q0 = get_vector(j["q0"], "initial.q0", n);
    if (j.contains("v0")) cfg.v0 = get_vector(j["v0"], "initial.v0", n);
  }

  cfg.output.fields = output_field_names();
  if (doc.contains("output")) {
    const json& j = doc["output"];
    check_keys(j, {"path", "fields"}, "output");
    if (j.contains("path")) cfg.output.path = get_string(j["path"], "output.path");
    if (j.contains("fields")) {
      if (!j["fields"].is_array()) fail("output.fields", "expected an array of strings");
      std::set<std::string> wanted;
      for (std::size_t i = 0; i < j["fields"].size(); ++i) {
        const std::string p = "output.fields[" + std::to_string(i) + "]";
        const std::string f = get_string(j["fields"][i], p);
        const auto& names = output_field_names();
        if (std::find(names.begin(), names.end(), f) == names.end()) fail(p, "unknown field '" + f + "'");
        wanted.insert(f);
      }
      cfg.output.fields.clear();
      for (const auto& f : output_field_names()) {
        if (wanted.count(f)) cfg.output.fields.push_back(f);
      }
    }
  }
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

const SystemTemplate* template_for(const SystemSpec& spec) {
  return spec.builtin ? &find_builtin(*spec.builtin) : nullptr;
}

LagrangeDiracSystem build_system(const SystemSpec& spec) {
  if (spec.builtin) return build_builtin(*spec.builtin, spec.params);
  const CustomSystem& c = *spec.custom;
  std::vector<DistributionField> subs;
  for (const auto& s : c.subsystems) subs.push_back(s.constraints.field(s.dim));
  LagrangeDiracSystem sys{"custom", LagrangianModel::polynomial(c.dimension, c.lagrangian),
                          ForceField::polynomial(c.dimension, c.forces),
                          InterconnectionSpec(std::move(subs), c.coupling.field(c.dimension)),
                          {}};
  sys.check();
  return sys;
}

json export_builtin(const std::string& name, const Params& params, bool as_custom) {
  const SystemTemplate& t = find_builtin(name);
  const Params resolved = resolve_params(name, params);
  json doc;
  if (as_custom) {
    if (!t.polynomial) {
      throw std::invalid_argument(name + " has no polynomial form; export it as a builtin");
    }
    const LagrangeDiracSystem sys = build_builtin(name, resolved);
    json custom;
    custom["dimension"] = sys.config_dim();
    json subs = json::array();
    for (const auto& f : sys.constraints.subsystems()) {
      json s{{"dim", f.config_dim()}};
      if (f.rows() > 0) s["constraints"] = rows_to_json(f);
      subs.push_back(s);
    }
    custom["subsystems"] = subs;
    json lag = json::array();
    for (const auto& term : *sys.lagrangian.terms()) {
      lag.push_back({{"coeff", term.coeff}, {"q_exps", term.q_exps}, {"v_exps", term.v_exps}});
    }
    custom["lagrangian"] = lag;
    json forces = json::array();
    for (const auto& term : *sys.force.terms()) {
      forces.push_back({{"component", term.component},
                        {"coeff", term.coeff},
                        {"q_exps", term.q_exps},
                        {"v_exps", term.v_exps}});
    }
    custom["forces"] = forces;
    if (sys.constraints.coupling().rows() > 0) custom["coupling"] = rows_to_json(sys.constraints.coupling());
    doc["system"] = {{"custom", custom}};
  } else {
    json p = json::object();
    for (const auto& [k, v] : resolved) p[k] = v;
    doc["system"] = {{"builtin", name}, {"params", p}};
  }
  doc["integrator"] = {{"scheme", scheme_name(t.scheme)}, {"h", t.h}, {"t_final", t.t_final}};
  doc["initial"] = {{"q0", t.q0}, {"v0", t.v0}};
  return doc;
}

}  // namespace dirac
