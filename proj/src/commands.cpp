#include "dirac/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "dirac/config.hpp"
#include "dirac/errors.hpp"

namespace dirac {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  if (std::abs(x) < 1e-12) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + short_num(v(i));
  return s + ")";
}

// Rows of the reduced row echelon form of m, with partial pivoting.
Matrix reduced_rows(Matrix m, double tol = 1e-10) {
  Index r = 0;
  for (Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Index piv = r;
    m.col(c).segment(r, m.rows() - r).cwiseAbs().maxCoeff(&piv);
    piv += r;
    if (std::abs(m(piv, c)) < tol) continue;
    m.row(r).swap(m.row(piv));
    m.row(r) /= m(r, c);
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != r) m.row(i) -= m(i, c) * m.row(r);
    }
    ++r;
  }
  return m.topRows(r);
}

// Covector written as a combination of dq_i, leading coefficient 1.
std::string covector_str(const Vector& c) {
  std::string s;
  for (Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) < 1e-10) continue;
    const double a = std::abs(c(i));
    s += s.empty() ? (c(i) < 0 ? "-" : "") : (c(i) < 0 ? " - " : " + ");
    if (std::abs(a - 1.0) > 1e-10) s += short_num(a) + " ";
    s += "dq_" + std::to_string(i);
  }
  return s;
}

struct Loaded {
  SimulationConfig cfg;
  LagrangeDiracSystem sys;
};

Loaded load(const std::string& path) {
  SimulationConfig cfg = load_config(path);
  try {
    LagrangeDiracSystem sys = build_system(cfg.system);
    return {std::move(cfg), std::move(sys)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct PointCheck {
  bool dirac = false;
  bool projection = false;
  bool reference = false;
  bool two_form = false;
  Index dim = 0;
};

PointCheck check_point(const LagrangeDiracSystem& sys, const Vector& q, const Vector& p) {
  const Index n = sys.config_dim();
  PointCheck c;
  const LinearDirac d = interconnect_at(sys.constraints, q, p);
  c.dim = d.subspace().dim();
  c.dirac = d.base_dim() == 2 * n && validate_dirac(d.subspace());
  const Subspace lift = lift_rows(sys.constraints.stacked_constraints(q));
  c.projection = equals(d.velocity_projection(), lift);
  c.reference = equals(d, interconnect_reference_at(sys.constraints, q, p));
  const TwoFormOnDistribution tf = extract_two_form(d);
  const Matrix& u = tf.distribution.basis();
  const Matrix diff = u.transpose() * (tf.form - canonical_form(n)) * u;
  c.two_form = equals(tf.distribution, lift) && (diff.size() == 0 || diff.cwiseAbs().maxCoeff() <= 1e-9);
  return c;
}

void write_header(std::ostream& os, const std::vector<std::string>& fields, Index n, Index m) {
  std::string line;
  auto add = [&](const std::string& s) { line += (line.empty() ? "" : ",") + s; };
  for (const auto& f : fields) {
    if (f == "q" || f == "v" || f == "p") {
      for (Index i = 0; i < n; ++i) add(f + "_" + std::to_string(i));
    } else if (f == "mu") {
      for (Index i = 0; i < m; ++i) add("mu_" + std::to_string(i));
    } else {
      add(f);
    }
  }
  os << line << '\n';
}

void write_row(std::ostream& os, const std::vector<std::string>& fields,
               const PontryaginState& s, const StepDiagnostics& d) {
  std::string line;
  auto add = [&](const std::string& x) { line += (line.empty() ? "" : ",") + x; };
  auto add_vec = [&](const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) add(num(v(i)));
  };
  for (const auto& f : fields) {
    if (f == "t") add(num(s.t));
    else if (f == "q") add_vec(s.q);
    else if (f == "v") add_vec(s.v);
    else if (f == "p") add_vec(s.p);
    else if (f == "mu") add_vec(s.mu);
    else if (f == "E") add(num(d.energy));
    else if (f == "power_residual") add(num(d.power_residual));
    else if (f == "constraint_residual_max") add(num(d.constraint_residual_max));
    else if (f == "newton_iters") add(std::to_string(d.newton_iters));
  }
  os << line << '\n';
}

}  // namespace

int cmd_verify(const std::string& config_path, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  std::optional<Loaded> l;
  try {
    l.emplace(load(config_path));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const LagrangeDiracSystem& sys = l->sys;
  const Index n = sys.config_dim();
  out << "system " << sys.name << ": configuration dim " << n << ", phase dim " << 2 * n
      << ", subsystems " << sys.constraints.subsystems().size() << ", constraint rows "
      << sys.multiplier_count() << '\n';

  std::vector<std::string> failures;
  const RankReport rr = check_constant_rank(sys.constraints, seed, 8);
  for (std::size_t k = 0; k < rr.points.size(); ++k) {
    const Vector q = rr.points[k].head(n), p = rr.points[k].tail(n);
    const PointCheck c = check_point(sys, q, p);
    out << "point " << k << ": dim D = " << c.dim << ", constraint rank "
        << rr.constraint_ranks[k] << ", dirac " << (c.dirac ? "ok" : "FAIL")
        << ", velocity projection " << (c.projection ? "ok" : "FAIL") << ", induced form "
        << (c.reference ? "ok" : "FAIL") << ", two-form " << (c.two_form ? "ok" : "FAIL")
        << '\n';
    const std::string at = " at point " + std::to_string(k);
    if (!c.dirac) failures.push_back("dirac validity" + at);
    if (!c.projection) failures.push_back("velocity projection law" + at);
    if (!c.reference) failures.push_back("induced structure identity" + at);
    if (!c.two_form) failures.push_back("two-form extraction" + at);
  }
  if (!rr.constant) failures.push_back("constant rank across sample points");
  const Index rank = rr.constraint_ranks.front();
  if (rank == 0) {
    out << "canonical structure, rank " << 2 * n << '\n';
  } else {
    out << "constraint kernel dim " << n - rank << " (rank " << rank << " of "
        << sys.multiplier_count() << " rows)\n";
  }
  out << "two-form: canonical form restricted to the constraint lift\n";
  if (!failures.empty()) {
    for (const auto& f : failures) out << "FAIL: " << f << '\n';
    return kExitCheckFailed;
  }
  out << "verify: all checks passed\n";
  return kExitOk;
}

int cmd_compose(const std::string& config_path, const std::optional<std::vector<double>>& point,
                std::ostream& out, std::ostream& err) {
  std::optional<Loaded> l;
  try {
    l.emplace(load(config_path));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const LagrangeDiracSystem& sys = l->sys;
  const Index n = sys.config_dim();
  Vector x = Vector::Zero(2 * n);
  if (point) {
    if (static_cast<Index>(point->size()) != 2 * n) {
      err << "error: --point expects " << 2 * n << " numbers (q then p), got " << point->size()
          << '\n';
      return kExitUsage;
    }
    for (Index i = 0; i < 2 * n; ++i) x(i) = (*point)[static_cast<std::size_t>(i)];
  }
  const Vector q = x.head(n), p = x.tail(n);
  const LinearDirac d = interconnect_at(sys.constraints, q, p);
  const Matrix w = sys.constraints.stacked_constraints(q);
  const Subspace config_delta = Subspace::kernel(w);
  out << "system " << sys.name << " at (q, p) = " << vec_str(x) << '\n';
  out << "dimension " << d.subspace().dim() << " (phase dim " << 2 * n << ")\n";
  out << "velocity projection dim " << d.velocity_projection().dim() << '\n';
  out << "configuration velocity projection dim " << config_delta.dim() << '\n';
  const Subspace ann = annihilator(config_delta);
  if (ann.dim() == 0) {
    out << "canonical structure: no annihilator directions beyond the symplectic image\n";
  } else {
    out << "annihilator directions beyond the symplectic image:\n";
    const Matrix rows = reduced_rows(ann.basis().transpose());
    for (Index j = 0; j < rows.rows(); ++j) out << "  " << covector_str(rows.row(j).transpose()) << '\n';
  }
  out << "basis ((qdot, pdot), (alpha_q, alpha_p)):\n";
  for (Index j = 0; j < d.subspace().dim(); ++j) out << "  " << vec_str(d.subspace().basis().col(j)) << '\n';
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const SimulateOverrides& ov, std::ostream& out,
                 std::ostream& err) {
  std::optional<Loaded> l;
  IntegratorConfig ic;
  double t_final = 0.0;
  Vector q0, v0;
  try {
    l.emplace(load(config_path));
    const SimulationConfig& cfg = l->cfg;
    const SystemTemplate* t = template_for(cfg.system);
    if (cfg.integrator) ic = *cfg.integrator;
    else if (t) ic.h = t->h, ic.scheme = t->scheme;
    else throw ConfigError(config_path + ": integrator section required for custom systems");
    if (cfg.t_final) t_final = *cfg.t_final;
    else if (t) t_final = t->t_final;
    else if (!ov.t_final) throw ConfigError(config_path + ": integrator.t_final required");
    const Index n = l->sys.config_dim();
    auto pick = [&](const std::optional<std::vector<double>>& given,
                    const std::vector<double>* fallback, const char* what) {
      if (given) return Vector(Eigen::Map<const Vector>(given->data(), n));
      if (fallback) return Vector(Eigen::Map<const Vector>(fallback->data(), n));
      throw ConfigError(config_path + ": initial." + what + " required for custom systems");
    };
    q0 = pick(cfg.q0, t ? &t->q0 : nullptr, "q0");
    v0 = pick(cfg.v0, t ? &t->v0 : nullptr, "v0");
    if (ov.h) ic.h = *ov.h;
    if (ov.t_final) t_final = *ov.t_final;
    if (ov.scheme) ic.scheme = parse_scheme(*ov.scheme);
    if (ov.tol) ic.newton_tol = *ov.tol;
    ic.check();
    if (!(t_final > 0.0)) throw ConfigError("t_final must be > 0");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  LagrangeDiracSystem& sys = l->sys;
  const SimulationConfig& cfg = l->cfg;

  const RankReport rr = check_constant_rank(sys.constraints, ov.seed.value_or(kDefaultSeed), 8);
  if (!rr.constant) err << "warning: constraint rank varies across sample points\n";

  std::ofstream file;
  const std::optional<std::string> path = ov.out ? ov.out : cfg.output.path;
  if (path) {
    file.open(*path, std::ios::out | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << *path << '\n';
      return kExitUsage;
    }
  }
  std::ostream& csv = path ? static_cast<std::ostream&>(file) : out;
  write_header(csv, cfg.output.fields, sys.config_dim(), sys.multiplier_count());

  PontryaginState init;
  try {
    init = initialize(sys, q0, v0, ic);
  } catch (const InconsistentState& e) {
    csv << "# integration failure at t=0: " << e.what() << '\n';
    err << "error: " << e.what() << '\n';
    return kExitIntegration;
  }
  const SimulationResult res = simulate(sys, init, ic, t_final);
  const auto& tr = res.trajectory;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    write_row(csv, cfg.output.fields, tr.states[k], tr.diagnostics[k]);
  }
  if (!res.ok) {
    csv << "# integration failure after t=" << num(tr.states.back().t) << ": " << res.error << '\n';
    err << "error: " << res.error << '\n';
    return kExitIntegration;
  }
  if (path) out << "wrote " << tr.states.size() << " rows to " << *path << '\n';
  return kExitOk;
}

int cmd_list(std::ostream& out) {
  for (const auto& t : list_builtins()) {
    out << t.name << ": " << t.summary << '\n';
    out << "  params:";
    for (const auto& p : t.params) out << ' ' << p.name << '=' << short_num(p.default_value);
    out << "\n  " << t.reference << '\n';
  }
  return kExitOk;
}

int cmd_export(const std::string& name, bool as_custom, std::ostream& out, std::ostream& err) {
  try {
    out << export_builtin(name, {}, as_custom).dump(2) << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace dirac
