#include <gtest/gtest.h>

#include "dirac/errors.hpp"
#include "dirac/integrator.hpp"
#include "dirac/lagrange_dirac.hpp"
#include "dirac/systems.hpp"

namespace dirac {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PontryaginState state(Vector q, Vector v, Vector p, Vector mu = Vector()) {
  PontryaginState s;
  s.q = std::move(q);
  s.v = std::move(v);
  s.p = std::move(p);
  s.mu = std::move(mu);
  return s;
}

TEST(Energy, ZeroLagrangianIsPairing) {
  LagrangeDiracSystem sys{"zero", LagrangianModel::polynomial(2, {}), ForceField::zero(2),
                          InterconnectionSpec({DistributionField::unconstrained(2)},
                                              DistributionField::unconstrained(2)),
                          {}};
  EXPECT_DOUBLE_EQ(generalized_energy(sys, vec({1, 2}), vec({3, 4}), vec({5, 6})), 39.0);
}

TEST(Energy, MassSpringAtRest) {
  const auto sys = build_builtin("mass-spring");
  EXPECT_DOUBLE_EQ(generalized_energy(sys, Vector::Zero(4), Vector::Zero(4), Vector::Zero(4)), 0.0);
}

TEST(Residual, HarmonicSolutionPoint) {
  const auto sys = build_builtin("harmonic");
  const auto s = state(vec({1}), vec({0}), vec({0}));
  EXPECT_LT(residual(sys, s, vec({0}), vec({-1})).norm(), 1e-14);
  EXPECT_EQ(residual(sys, s, vec({0}), vec({-1})).size(), 3);
}

TEST(Residual, DampedSolutionPoint) {
  const auto sys = build_builtin("damped");
  const double r = resolve_params("damped", {}).at("r");
  const auto s = state(vec({0}), vec({1}), vec({1}));
  EXPECT_LT(residual(sys, s, vec({1}), vec({-r})).norm(), 1e-14);
}

TEST(Residual, ConstraintRowsAppended) {
  const auto sys = build_builtin("mass-spring");
  const auto s = state(Vector::Zero(4), vec({0, 1, 0, 0}), vec({0, 1, 0, 0}), vec({0}));
  const Vector r = residual(sys, s, vec({0, 1, 0, 0}), Vector::Zero(4));
  ASSERT_EQ(r.size(), 13);
  EXPECT_DOUBLE_EQ(r(12), 1.0);
}

TEST(Membership, HarmonicSolutionAndPerturbation) {
  const auto sys = build_builtin("harmonic");
  const auto s = state(vec({1}), vec({0}), vec({0}));
  EXPECT_TRUE(check_membership(sys, s, vec({0}), vec({-1}), 1e-10));
  EXPECT_FALSE(check_membership(sys, s, vec({0}), vec({0}), 1e-10));
}

TEST(Membership, ConstraintForceInAnnihilator) {
  // Mass-spring with a coupling force mu (dx2 - dxb2) is a solution point.
  const auto sys = build_builtin("mass-spring");
  const Vector q = vec({0.5, 0.1, 0.1, -0.5}), v = vec({0.2, 0.3, 0.3, -0.1});
  auto s = state(q, v, sys.lagrangian.grad_v(q, v), vec({0.7}));
  Vector pdot = sys.lagrangian.grad_q(q, v);
  pdot(1) += 0.7;
  pdot(2) -= 0.7;
  EXPECT_LT(residual(sys, s, v, pdot).norm(), 1e-12);
  EXPECT_TRUE(check_membership(sys, s, v, pdot, 1e-10));
  pdot(1) += 1.0;
  EXPECT_FALSE(check_membership(sys, s, v, pdot, 1e-10));
}

TEST(PowerBalance, HarmonicAndDamped) {
  const auto h = build_builtin("harmonic");
  const auto sh = state(vec({0.6}), vec({0.8}), vec({0.8}));
  EXPECT_NEAR(power_balance_residual(h, sh, vec({0.8}), vec({-0.6})), 0.0, 1e-14);
  const auto d = build_builtin("damped");
  const double r = resolve_params("damped", {}).at("r");
  const auto sd = state(vec({0.6}), vec({0.8}), vec({0.8}));
  EXPECT_NEAR(power_balance_residual(d, sd, vec({0.8}), vec({-0.6 - r * 0.8})), 0.0, 1e-14);
}

TEST(InterfaceForces, MassSpringOpposite) {
  const auto sys = build_builtin("mass-spring");
  const Vector q = vec({0.5, 0.1, 0.1, -0.5}), v = vec({0.2, 0.3, 0.3, -0.1});
  const double mu = -0.4;
  auto s = state(q, v, sys.lagrangian.grad_v(q, v), vec({mu}));
  Vector pdot = sys.lagrangian.grad_q(q, v);
  pdot(1) += mu;
  pdot(2) -= mu;
  const auto f = recover_interface_forces(sys, s, v, pdot);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[0](1) + f[1](0), 0.0, 1e-15);
  EXPECT_NEAR(f[0](1), mu, 1e-15);
  EXPECT_NEAR(f[0](0), 0.0, 1e-15);
  EXPECT_NEAR(f[1](1), 0.0, 1e-15);
  EXPECT_NEAR(f[0](1) * v(1) + f[1](0) * v(2), 0.0, 1e-15);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(subsystem_residual(sys, i, s, v, pdot, f[i]).norm(), 1e-12);
  }
  pdot(0) += 1.0;
  EXPECT_THROW(recover_interface_forces(sys, s, v, pdot), InconsistentState);
}

TEST(InterfaceForces, CircuitPortsOpposite) {
  // With the coupling v_S1 = v_S2 the port forces lie in span(dq_S1 - dq_S2).
  const auto sys = build_builtin("rlc");
  IntegratorConfig cfg;
  cfg.h = 1e-3;
  const auto& t = find_builtin("rlc");
  const PontryaginState s0 =
      initialize(sys, Eigen::Map<const Vector>(t.q0.data(), 5), Eigen::Map<const Vector>(t.v0.data(), 5), cfg);
  const PontryaginState s1 = step(sys, s0, cfg);
  const DiscreteView dv = discrete_view(s0, s1, cfg.h, cfg.scheme);
  const auto f = recover_interface_forces(sys, dv.state, dv.qdot, dv.pdot);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[0](2) + f[1](0), 0.0, 1e-12);
  EXPECT_NEAR(f[0](0), 0.0, 1e-15);
  EXPECT_NEAR(f[1](1), 0.0, 1e-15);
}

TEST(InterfaceForces, NoCouplingMeansNoForce) {
  auto sys = build_builtin("mass-spring");
  sys.constraints = InterconnectionSpec(sys.constraints.subsystems(), DistributionField::unconstrained(4));
  const Vector q = vec({0.5, 0.1, -0.2, -0.5}), v = vec({0.2, 0.3, -0.1, 0.0});
  auto s = state(q, v, sys.lagrangian.grad_v(q, v), Vector());
  const Vector pdot = sys.lagrangian.grad_q(q, v);
  for (const auto& f : recover_interface_forces(sys, s, v, pdot)) EXPECT_EQ(f.norm(), 0.0);
}

TEST(Splitting, AssembledSubsystemsSolveTheWhole) {
  const auto sys = build_builtin("mass-spring");
  const Vector q = vec({0.5, 0.1, 0.1, -0.5}), v = vec({0.2, 0.3, 0.3, -0.1});
  const double mu = 0.25;
  Vector pdot = sys.lagrangian.grad_q(q, v);
  pdot(1) += mu;
  pdot(2) -= mu;
  const Vector p = sys.lagrangian.grad_v(q, v);
  std::vector<SubsystemSolution> parts(2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto [a, b] = sys.slice(i);
    auto& part = parts[i];
    part.q = q.segment(a, b - a);
    part.v = v.segment(a, b - a);
    part.p = p.segment(a, b - a);
    part.mu = Vector();
    part.qdot = v.segment(a, b - a);
    part.pdot = pdot.segment(a, b - a);
    part.interface_force = Vector::Zero(b - a);
  }
  parts[0].interface_force(1) = mu;
  parts[1].interface_force(0) = -mu;
  const AssembledSolution whole = assemble_from_subsystems(sys, parts);
  EXPECT_LT(whole.force_residual, 1e-12);
  EXPECT_NEAR(whole.state.mu(0), mu, 1e-12);
  EXPECT_LT(residual(sys, whole.state, whole.qdot, whole.pdot).norm(), 1e-12);
  // A force outside the coupling annihilator is reported.
  parts[1].interface_force(0) = mu;
  EXPECT_GT(assemble_from_subsystems(sys, parts).force_residual, 0.1);
}

TEST(System, CheckRejectsMismatchedParts) {
  LagrangeDiracSystem sys{"bad", LagrangianModel::polynomial(2, {}), ForceField::zero(3),
                          InterconnectionSpec({DistributionField::unconstrained(2)},
                                              DistributionField::unconstrained(2)),
                          {}};
  EXPECT_THROW(sys.check(), DimensionMismatch);
}

}  // namespace
}  // namespace dirac
