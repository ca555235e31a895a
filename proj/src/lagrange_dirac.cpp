#include "dirac/lagrange_dirac.hpp"

#include <string>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

void check_state(const LagrangeDiracSystem& sys, const PontryaginState& s, const Vector& qdot,
                 const Vector& pdot) {
  const Index n = sys.config_dim();
  if (s.q.size() != n || s.v.size() != n || s.p.size() != n || qdot.size() != n ||
      pdot.size() != n) {
    throw DimensionMismatch("state vectors must have length " + std::to_string(n));
  }
  if (s.mu.size() != sys.multiplier_count()) {
    throw DimensionMismatch("mu has length " + std::to_string(s.mu.size()) + ", expected " +
                            std::to_string(sys.multiplier_count()));
  }
}

}  // namespace

std::pair<Index, Index> LagrangeDiracSystem::slice(std::size_t i) const {
  const Index off = constraints.offset(i);
  return {off, off + constraints.subsystems()[i].config_dim()};
}

void LagrangeDiracSystem::check() const {
  const Index n = config_dim();
  if (lagrangian.config_dim() != n || force.config_dim() != n) {
    throw DimensionMismatch(name + ": Lagrangian, force and constraints disagree on dimension");
  }
}

double generalized_energy(const LagrangeDiracSystem& sys, const Vector& q, const Vector& v,
                          const Vector& p) {
  return p.dot(v) - sys.lagrangian.value(q, v);
}

Vector residual(const LagrangeDiracSystem& sys, const PontryaginState& s, const Vector& qdot,
                const Vector& pdot) {
  check_state(sys, s, qdot, pdot);
  const Index n = sys.config_dim();
  const Matrix w = sys.constraints.stacked_constraints(s.q);
  Vector r(3 * n + w.rows());
  r.segment(0, n) = qdot - s.v;
  r.segment(n, n) = pdot - sys.lagrangian.grad_q(s.q, s.v) - sys.force(s.q, s.v, s.p) -
                    w.transpose() * s.mu;
  r.segment(2 * n, n) = s.p - sys.lagrangian.grad_v(s.q, s.v);
  r.tail(w.rows()) = w * s.v;
  return r;
}

bool check_membership(const LagrangeDiracSystem& sys, const PontryaginState& s,
                      const Vector& qdot, const Vector& pdot, double tol) {
  check_state(sys, s, qdot, pdot);
  const Index n = sys.config_dim();
  const LinearDirac d = interconnect_at(sys.constraints, s.q, s.p);
  Vector x(4 * n);
  x << qdot, pdot, -sys.lagrangian.grad_q(s.q, s.v) - sys.force(s.q, s.v, s.p), s.v;
  return d.subspace().residual(x) <= tol * std::max(1.0, x.norm());
}

double power_balance_residual(const LagrangeDiracSystem& sys, const PontryaginState& s,
                              const Vector& qdot, const Vector& pdot) {
  check_state(sys, s, qdot, pdot);
  const double de_dt = pdot.dot(s.v) - sys.lagrangian.grad_q(s.q, s.v).dot(qdot);
  return de_dt - sys.force(s.q, s.v, s.p).dot(qdot);
}

double multiplier_power(const LagrangeDiracSystem& sys, const PontryaginState& s) {
  const Matrix w = sys.constraints.stacked_constraints(s.q);
  return (w.transpose() * s.mu).dot(s.v);
}

std::vector<Vector> recover_interface_forces(const LagrangeDiracSystem& sys,
                                             const PontryaginState& s, const Vector& qdot,
                                             const Vector& pdot, double tol) {
  const double r = residual(sys, s, qdot, pdot).norm();
  if (r > tol) {
    throw InconsistentState("recover_interface_forces: residual " + std::to_string(r) +
                            " exceeds tolerance " + std::to_string(tol));
  }
  const Matrix wc = sys.constraints.coupling().omega(s.q);
  const Vector fc = wc.transpose() * s.mu.tail(wc.rows());
  std::vector<Vector> out;
  for (std::size_t i = 0; i < sys.constraints.subsystems().size(); ++i) {
    const auto [a, b] = sys.slice(i);
    out.push_back(fc.segment(a, b - a));
  }
  return out;
}

Vector subsystem_residual(const LagrangeDiracSystem& sys, std::size_t i,
                          const PontryaginState& s, const Vector& qdot, const Vector& pdot,
                          const Vector& interface_force) {
  check_state(sys, s, qdot, pdot);
  const auto [a, b] = sys.slice(i);
  const Index ni = b - a;
  const auto& field = sys.constraints.subsystems()[i];
  Index row = 0;
  for (std::size_t k = 0; k < i; ++k) row += sys.constraints.subsystems()[k].rows();
  const Vector qi = s.q.segment(a, ni), vi = s.v.segment(a, ni);
  const Matrix wi = field.omega(qi);
  const Vector mui = s.mu.segment(row, wi.rows());
  const Vector gq = sys.lagrangian.grad_q(s.q, s.v).segment(a, ni);
  const Vector gv = sys.lagrangian.grad_v(s.q, s.v).segment(a, ni);
  const Vector f = sys.force(s.q, s.v, s.p).segment(a, ni);
  Vector r(3 * ni + wi.rows());
  r.segment(0, ni) = qdot.segment(a, ni) - vi;
  r.segment(ni, ni) = pdot.segment(a, ni) - gq - f - interface_force - wi.transpose() * mui;
  r.segment(2 * ni, ni) = s.p.segment(a, ni) - gv;
  r.tail(wi.rows()) = wi * vi;
  return r;
}

AssembledSolution assemble_from_subsystems(const LagrangeDiracSystem& sys,
                                           const std::vector<SubsystemSolution>& parts) {
  const auto& subs = sys.constraints.subsystems();
  if (parts.size() != subs.size()) {
    throw DimensionMismatch("assemble_from_subsystems: expected " +
                            std::to_string(subs.size()) + " parts");
  }
  const Index n = sys.config_dim();
  AssembledSolution out;
  out.state.q.resize(n);
  out.state.v.resize(n);
  out.state.p.resize(n);
  out.qdot.resize(n);
  out.pdot.resize(n);
  Vector force(n);
  Vector mu_sub(sys.constraints.subsystem_rows());
  Index row = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto [a, b] = sys.slice(i);
    const Index ni = b - a;
    const auto& part = parts[i];
    if (part.q.size() != ni || part.mu.size() != subs[i].rows()) {
      throw DimensionMismatch("assemble_from_subsystems: part " + std::to_string(i) +
                              " has wrong shape");
    }
    out.state.q.segment(a, ni) = part.q;
    out.state.v.segment(a, ni) = part.v;
    out.state.p.segment(a, ni) = part.p;
    out.qdot.segment(a, ni) = part.qdot;
    out.pdot.segment(a, ni) = part.pdot;
    force.segment(a, ni) = part.interface_force;
    mu_sub.segment(row, part.mu.size()) = part.mu;
    row += part.mu.size();
  }
  const Matrix wc = sys.constraints.coupling().omega(out.state.q);
  Vector mu_c = Vector::Zero(wc.rows());
  if (wc.rows() > 0) {
    mu_c = wc.transpose().completeOrthogonalDecomposition().solve(force);
  }
  out.force_residual = (wc.transpose() * mu_c - force).norm();
  out.state.mu.resize(mu_sub.size() + mu_c.size());
  out.state.mu << mu_sub, mu_c;
  return out;
}

}  // namespace dirac
