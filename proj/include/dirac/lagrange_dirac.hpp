#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dirac/induced.hpp"
#include "dirac/lagrangian.hpp"

namespace dirac {

/// A point (q, v, p) of the Pontryagin bundle together with the constraint
/// multipliers mu (subsystem rows in subsystem order, then coupling rows).
struct PontryaginState {
  double t = 0.0;
  Vector q;
  Vector v;
  Vector p;
  Vector mu;
};

struct LagrangeDiracSystem;

/// Re-chart hook: may rewrite the state (and internal chart data captured by
/// the system's closures). Returns true when the chart changed.
using RechartFn = std::function<bool(LagrangeDiracSystem&, PontryaginState&)>;

struct LagrangeDiracSystem {
  std::string name;
  LagrangianModel lagrangian;
  ForceField force;
  InterconnectionSpec constraints;
  RechartFn rechart;

  Index config_dim() const { return constraints.config_dim(); }
  Index multiplier_count() const { return constraints.total_rows(); }
  /// Half-open coordinate range [first, second) of subsystem i.
  std::pair<Index, Index> slice(std::size_t i) const;
  void check() const;
};

double generalized_energy(const LagrangeDiracSystem& sys, const Vector& q, const Vector& v,
                          const Vector& p);

/// Stacked rows (a) qdot - v, (b) pdot - dL/dq - F - omega^T mu,
/// (c) p - dL/dv, (d) omega v; length 3n + m.
Vector residual(const LagrangeDiracSystem& sys, const PontryaginState& state,
                const Vector& qdot, const Vector& pdot);

/// ((qdot, pdot), (-dL/dq - F, v)) in the interconnected Dirac structure.
bool check_membership(const LagrangeDiracSystem& sys, const PontryaginState& state,
                      const Vector& qdot, const Vector& pdot, double tol);

/// d/dt E_L - <F, qdot> along (qdot, pdot).
double power_balance_residual(const LagrangeDiracSystem& sys, const PontryaginState& state,
                              const Vector& qdot, const Vector& pdot);
/// <omega^T mu, v>, the power of constraint forces.
double multiplier_power(const LagrangeDiracSystem& sys, const PontryaginState& state);

/// Per-subsystem interface forces from the coupling multipliers. Throws
/// InconsistentState when the total residual exceeds `tol`.
std::vector<Vector> recover_interface_forces(const LagrangeDiracSystem& sys,
                                             const PontryaginState& state,
                                             const Vector& qdot, const Vector& pdot,
                                             double tol = 1e-8);

/// Residual of subsystem i as a forced system with the given interface force.
Vector subsystem_residual(const LagrangeDiracSystem& sys, std::size_t i,
                          const PontryaginState& state, const Vector& qdot,
                          const Vector& pdot, const Vector& interface_force);

struct SubsystemSolution {
  Vector q, v, p, mu, qdot, pdot, interface_force;
};

struct AssembledSolution {
  PontryaginState state;
  Vector qdot;
  Vector pdot;
  /// Distance of the stacked interface force from the coupling annihilator.
  double force_residual = 0.0;
};

/// Glues subsystem solutions together; coupling multipliers are recovered by
/// least squares from the interface forces.
AssembledSolution assemble_from_subsystems(const LagrangeDiracSystem& sys,
                                           const std::vector<SubsystemSolution>& parts);

}  // namespace dirac
