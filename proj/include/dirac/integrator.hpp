#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dirac/lagrange_dirac.hpp"

namespace dirac {

enum class Scheme { ImplicitMidpoint, BackwardEuler };

std::string scheme_name(Scheme s);
/// Accepts "implicit-midpoint" and "backward-euler".
Scheme parse_scheme(const std::string& name);

class StepProblem;

struct IntegratorConfig {
  using JacobianFn = std::function<Matrix(const StepProblem&, const Vector&)>;

  Scheme scheme = Scheme::ImplicitMidpoint;
  double h = 0.01;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  /// Empty means forward finite differences.
  JacobianFn jacobian;
  /// Run the consistent-initialization solve in initialize().
  bool presolve = true;

  void check() const;
};

/// The nonlinear system of one step. Unknowns x = (q+, v+, p+, mu+).
/// Rows (a) and (b) are multiplied by h so all rows are increments.
class StepProblem {
 public:
  StepProblem(const LagrangeDiracSystem& sys, const PontryaginState& prev,
              const IntegratorConfig& cfg);

  Index size() const { return 3 * n_ + m_; }
  Vector initial_guess() const;
  Vector residual(const Vector& x) const;
  Matrix fd_jacobian(const Vector& x) const;
  PontryaginState unpack(const Vector& x) const;
  /// "a[i]", "b[i]", "c[i]" or "d[k]".
  std::string row_label(Index row) const;

 private:
  const LagrangeDiracSystem& sys_;
  const PontryaginState& prev_;
  const IntegratorConfig& cfg_;
  Index n_;
  Index m_;
};

struct StepDiagnostics {
  double energy = 0.0;
  double power_residual = 0.0;
  double constraint_residual_max = 0.0;
  int newton_iters = 0;
};

struct Trajectory {
  std::vector<PontryaginState> states;
  std::vector<StepDiagnostics> diagnostics;
};

struct SimulationResult {
  Trajectory trajectory;
  bool ok = true;
  std::string error;
};

/// The state at which the continuous residual is matched by one step, with
/// its difference quotients.
struct DiscreteView {
  PontryaginState state;
  Vector qdot;
  Vector pdot;
};

/// v projected onto ker omega(q0), p = dL/dv, mu = 0.
PontryaginState project_initial(const LagrangeDiracSystem& sys, const Vector& q0,
                                const Vector& v0);

/// Closest (v, mu) to the given state that satisfies omega v = 0 and the
/// hidden constraints from degenerate momentum directions; p is reset.
PontryaginState consistent_initialize(const LagrangeDiracSystem& sys,
                                      const PontryaginState& state);

/// project_initial followed by consistent_initialize when cfg.presolve is set.
PontryaginState initialize(const LagrangeDiracSystem& sys, const Vector& q0, const Vector& v0,
                           const IntegratorConfig& cfg);

/// One step. Throws StepFailure on non-convergence or a singular Jacobian.
PontryaginState step(const LagrangeDiracSystem& sys, const PontryaginState& state,
                     const IntegratorConfig& cfg, int* iterations = nullptr);

DiscreteView discrete_view(const PontryaginState& prev, const PontryaginState& next, double h,
                           Scheme scheme);

StepDiagnostics diagnose(const LagrangeDiracSystem& sys, const PontryaginState& state);
StepDiagnostics diagnose_step(const LagrangeDiracSystem& sys, const PontryaginState& prev,
                              const PontryaginState& next, const IntegratorConfig& cfg,
                              int iterations);

/// Integrates from `initial` for round(t_final / h) steps. On a step failure
/// the partial trajectory is returned with ok = false.
SimulationResult simulate(LagrangeDiracSystem& sys, const PontryaginState& initial,
                          const IntegratorConfig& cfg, double t_final);

}  // namespace dirac
