#include "dirac/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kJacobianRankTol = 1e-10;
constexpr double kHessianRankTol = 1e-6;

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Matrix forward_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                        const Vector& fx) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Matrix j(fx.size(), x.size());
  Vector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = root_eps * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    j.col(i) = (f(xp) - fx) / h;
    xp(i) = x(i);
  }
  return j;
}

}  // namespace

std::string scheme_name(Scheme s) {
  return s == Scheme::ImplicitMidpoint ? "implicit-midpoint" : "backward-euler";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "implicit-midpoint") return Scheme::ImplicitMidpoint;
  if (name == "backward-euler") return Scheme::BackwardEuler;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected implicit-midpoint or backward-euler)");
}

void IntegratorConfig::check() const {
  if (!(h > 0.0)) throw std::invalid_argument("integrator: h must be positive");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("integrator: newton_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("integrator: newton_max_iter must be >= 1");
}

StepProblem::StepProblem(const LagrangeDiracSystem& sys, const PontryaginState& prev,
                         const IntegratorConfig& cfg)
    : sys_(sys),
      prev_(prev),
      cfg_(cfg),
      n_(sys.config_dim()),
      m_(sys.multiplier_count()) {}

Vector StepProblem::initial_guess() const {
  Vector x(size());
  x << prev_.q + cfg_.h * prev_.v, prev_.v, prev_.p, prev_.mu;
  return x;
}

PontryaginState StepProblem::unpack(const Vector& x) const {
  PontryaginState s;
  s.t = prev_.t + cfg_.h;
  s.q = x.segment(0, n_);
  s.v = x.segment(n_, n_);
  s.p = x.segment(2 * n_, n_);
  s.mu = x.tail(m_);
  return s;
}

Vector StepProblem::residual(const Vector& x) const {
  const double h = cfg_.h;
  const PontryaginState next = unpack(x);
  Vector qe = next.q, ve = next.v, pe = next.p;
  if (cfg_.scheme == Scheme::ImplicitMidpoint) {
    qe = 0.5 * (prev_.q + next.q);
    ve = 0.5 * (prev_.v + next.v);
    pe = 0.5 * (prev_.p + next.p);
  }
  const Matrix we = sys_.constraints.stacked_constraints(qe);
  const Matrix wn = sys_.constraints.stacked_constraints(next.q);
  Vector r(size());
  r.segment(0, n_) = (next.q - prev_.q) - h * ve;
  r.segment(n_, n_) = (next.p - prev_.p) - h * (sys_.lagrangian.grad_q(qe, ve) +
                                                  sys_.force(qe, ve, pe) +
                                                  we.transpose() * next.mu);
  r.segment(2 * n_, n_) = next.p - sys_.lagrangian.grad_v(next.q, next.v);
  r.tail(m_) = wn * next.v;
  return r;
}

Matrix StepProblem::fd_jacobian(const Vector& x) const {
  return forward_jacobian([this](const Vector& y) { return residual(y); }, x, residual(x));
}

std::string StepProblem::row_label(Index row) const {
  const char* group = "abcd";
  const Index g = std::min<Index>(row / n_, 3);
  return std::string(1, group[g]) + "[" + std::to_string(row - g * n_) + "]";
}

PontryaginState project_initial(const LagrangeDiracSystem& sys, const Vector& q0,
                                const Vector& v0) {
  const Index n = sys.config_dim();
  if (q0.size() != n || v0.size() != n) {
    throw DimensionMismatch("project_initial: expected q0 and v0 of length " +
                            std::to_string(n));
  }
  PontryaginState s;
  s.q = q0;
  s.v = Subspace::kernel(sys.constraints.stacked_constraints(q0)).projector() * v0;
  s.p = sys.lagrangian.grad_v(s.q, s.v);
  s.mu = Vector::Zero(sys.multiplier_count());
  return s;
}

PontryaginState consistent_initialize(const LagrangeDiracSystem& sys,
                                      const PontryaginState& state) {
  const Index n = sys.config_dim(), m = sys.multiplier_count();
  const Vector& q = state.q;
  const Matrix w = sys.constraints.stacked_constraints(q);
  const Matrix hvv = sys.lagrangian.hessian_vv(q, state.v);
  const Matrix hvq = sys.lagrangian.hessian_vq(q, state.v);
  // Left kernel of the velocity Hessian: momentum directions fixed by q alone.
  const Matrix null_dirs = Subspace::kernel(hvv.transpose(), kHessianRankTol).basis();

  auto g = [&](const Vector& z) {
    const Vector v = z.head(n), mu = z.tail(m);
    const Vector p = sys.lagrangian.grad_v(q, v);
    Vector out(m + null_dirs.cols());
    out.head(m) = w * v;
    out.tail(null_dirs.cols()) =
        null_dirs.transpose() * (hvq * v - sys.lagrangian.grad_q(q, v) - sys.force(q, v, p) -
                                 w.transpose() * mu);
    return out;
  };

  // Multipliers enter scaled by kMuWeight so the minimum-norm step spends
  // almost nothing on changing them and stays close to the given v.
  constexpr double kMuWeight = 1e4;
  auto g_scaled = [&](const Vector& z) {
    Vector y = z;
    y.tail(m) *= kMuWeight;
    return g(y);
  };
  Vector z(n + m);
  z << state.v, state.mu / kMuWeight;
  Vector gz = g_scaled(z);
  for (int it = 0; it < 50 && gz.norm() > 1e-14; ++it) {
    const Matrix j = forward_jacobian(g_scaled, z, gz);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j);
    cod.setThreshold(kJacobianRankTol);
    const Vector dz = cod.solve(gz);
    z -= dz;
    gz = g_scaled(z);
    if (dz.norm() <= 1e-15 * (1.0 + z.norm())) break;
  }
  if (gz.norm() > 1e-8) {
    throw InconsistentState("no consistent initial velocity: hidden-constraint residual " +
                            fmt_double(gz.norm()));
  }
  PontryaginState out = state;
  out.v = z.head(n);
  out.mu = kMuWeight * z.tail(m);
  out.p = sys.lagrangian.grad_v(q, out.v);
  return out;
}

PontryaginState initialize(const LagrangeDiracSystem& sys, const Vector& q0, const Vector& v0,
                           const IntegratorConfig& cfg) {
  PontryaginState s = project_initial(sys, q0, v0);
  return cfg.presolve ? consistent_initialize(sys, s) : s;
}

PontryaginState step(const LagrangeDiracSystem& sys, const PontryaginState& state,
                     const IntegratorConfig& cfg, int* iterations) {
  cfg.check();
  const StepProblem prob(sys, state, cfg);
  Vector x = prob.initial_guess();
  std::vector<double> log;
  for (int it = 0; it <= cfg.newton_max_iter; ++it) {
    const Vector r = prob.residual(x);
    const double norm = r.norm();
    log.push_back(norm);
    if (!std::isfinite(norm)) {
      throw StepFailure("Newton residual is not finite at t=" + fmt_double(state.t), log);
    }
    if (norm <= cfg.newton_tol) {
      if (iterations) *iterations = it;
      return prob.unpack(x);
    }
    if (it == cfg.newton_max_iter) break;
    const Matrix j = cfg.jacobian ? cfg.jacobian(prob, x) : prob.fd_jacobian(x);
    Eigen::ColPivHouseholderQR<Matrix> qr(j);
    qr.setThreshold(kJacobianRankTol);
    if (qr.rank() < j.cols()) {
      Eigen::ColPivHouseholderQR<Matrix> rows_qr(j.transpose());
      rows_qr.setThreshold(kJacobianRankTol);
      std::vector<std::string> labels;
      const auto& perm = rows_qr.colsPermutation().indices();
      for (Index k = rows_qr.rank(); k < perm.size(); ++k) labels.push_back(prob.row_label(perm(k)));
      std::string what = "singular step Jacobian at t=" + fmt_double(state.t) + " (rank " +
                         std::to_string(qr.rank()) + " of " + std::to_string(j.cols()) +
                         "); dependent rows:";
      for (const auto& l : labels) what += " " + l;
      throw StepFailure(what, log, labels);
    }
    x -= qr.solve(r);
  }
  throw StepFailure("Newton did not converge in " + std::to_string(cfg.newton_max_iter) +
                        " iterations at t=" + fmt_double(state.t) + " (residual " +
                        fmt_double(log.back()) + ")",
                    log);
}

DiscreteView discrete_view(const PontryaginState& prev, const PontryaginState& next, double h,
                           Scheme scheme) {
  DiscreteView d;
  d.state = next;
  if (scheme == Scheme::ImplicitMidpoint) {
    d.state.t = 0.5 * (prev.t + next.t);
    d.state.q = 0.5 * (prev.q + next.q);
    d.state.v = 0.5 * (prev.v + next.v);
    d.state.p = 0.5 * (prev.p + next.p);
  }
  d.qdot = (next.q - prev.q) / h;
  d.pdot = (next.p - prev.p) / h;
  return d;
}

StepDiagnostics diagnose(const LagrangeDiracSystem& sys, const PontryaginState& s) {
  StepDiagnostics d;
  d.energy = generalized_energy(sys, s.q, s.v, s.p);
  const Vector legendre = s.p - sys.lagrangian.grad_v(s.q, s.v);
  const Vector cons = sys.constraints.stacked_constraints(s.q) * s.v;
  d.constraint_residual_max = legendre.cwiseAbs().maxCoeff();
  if (cons.size() > 0) {
    d.constraint_residual_max = std::max(d.constraint_residual_max, cons.cwiseAbs().maxCoeff());
  }
  return d;
}

StepDiagnostics diagnose_step(const LagrangeDiracSystem& sys, const PontryaginState& prev,
                              const PontryaginState& next, const IntegratorConfig& cfg,
                              int iterations) {
  StepDiagnostics d = diagnose(sys, next);
  const DiscreteView view = discrete_view(prev, next, cfg.h, cfg.scheme);
  const double e0 = generalized_energy(sys, prev.q, prev.v, prev.p);
  const Vector f = sys.force(view.state.q, view.state.v, view.state.p);
  d.power_residual = (d.energy - e0) / cfg.h - f.dot(view.qdot);
  d.newton_iters = iterations;
  return d;
}

SimulationResult simulate(LagrangeDiracSystem& sys, const PontryaginState& initial,
                          const IntegratorConfig& cfg, double t_final) {
  cfg.check();
  if (!(t_final > 0.0)) throw std::invalid_argument("simulate: t_final must be positive");
  const long steps = std::lround(t_final / cfg.h);
  SimulationResult out;
  PontryaginState cur = initial;
  const double t0 = initial.t;
  out.trajectory.states.push_back(cur);
  out.trajectory.diagnostics.push_back(diagnose(sys, cur));
  for (long k = 1; k <= steps; ++k) {
    int iters = 0;
    PontryaginState next;
    try {
      next = step(sys, cur, cfg, &iters);
    } catch (const StepFailure& e) {
      out.ok = false;
      out.error = e.what();
      return out;
    }
    next.t = t0 + static_cast<double>(k) * cfg.h;
    const StepDiagnostics diag = diagnose_step(sys, cur, next, cfg, iters);
    if (sys.rechart) sys.rechart(sys, next);
    out.trajectory.states.push_back(next);
    out.trajectory.diagnostics.push_back(diag);
    cur = next;
  }
  return out;
}

}  // namespace dirac
