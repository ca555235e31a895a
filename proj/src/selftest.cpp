#include "dirac/selftest.hpp"

#include <cmath>
#include <future>
#include <iostream>
#include <sstream>

#include "dirac/commands.hpp"
#include "dirac/config.hpp"
#include "dirac/random.hpp"

namespace dirac {

namespace {

using Result = std::optional<std::string>;

std::string describe(const Matrix& m) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (Index i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

std::string describe(const LinearDirac& d) {
  return "n=" + std::to_string(d.base_dim()) + " basis^T=" + describe(d.subspace().basis().transpose());
}

Index uniform_index(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

Result subspace_laws(std::mt19937_64& rng, Index n) {
  const Subspace a = random_subspace(rng, n, uniform_index(rng, 0, n), 3);
  const Subspace b = random_subspace(rng, n, uniform_index(rng, 0, n), 3);
  const std::string ctx = " for a=" + describe(a.basis().transpose()) + " b=" + describe(b.basis().transpose());
  if (a.dim() + annihilator(a).dim() != n) return "dim a + dim a° != n" + ctx;
  if (sum(a, b).dim() + intersect(a, b).dim() != a.dim() + b.dim()) return "dimension formula" + ctx;
  if (!equals(a, annihilator(annihilator(a)))) return "double annihilator" + ctx;
  if (!equals(annihilator(intersect(a, b)), sum(annihilator(a), annihilator(b)))) {
    return "(a ∩ b)° != a° + b°" + ctx;
  }
  if (!equals(Subspace::span(a.basis()), a)) return "span not idempotent" + ctx;
  return std::nullopt;
}

Result dirac_validity(std::mt19937_64& rng, Index n) {
  const LinearDirac d = random_dirac(rng, n);
  if (!validate_dirac(d.subspace())) return "invalid structure " + describe(d);
  if (!equals(pairing_orthogonal(d.subspace()), d.subspace())) return "D != D^perp for " + describe(d);
  return std::nullopt;
}

Result bowtie_laws(std::mt19937_64& rng, Index n) {
  const LinearDirac a = random_dirac(rng, n), b = random_dirac(rng, n), c = random_dirac(rng, n);
  const std::string ctx = " for a: " + describe(a) + ", b: " + describe(b);
  const LinearDirac ab = bowtie(a, b);
  if (!equals(ab, bowtie(b, a))) return "commutativity" + ctx;
  if (!equals(bowtie(ab, c), bowtie(a, bowtie(b, c)))) return "associativity" + ctx + ", c: " + describe(c);
  if (!equals(bowtie(a, identity_structure(n)), a)) return "identity law" + ctx;
  const Subspace meet = intersect(a.velocity_projection(), b.velocity_projection());
  if (!equals(ab.velocity_projection(), meet)) return "velocity projection law" + ctx;
  const Matrix& u = meet.basis();
  const Matrix diff = u.transpose() *
                      (extract_two_form(ab).form - extract_two_form(a).form - extract_two_form(b).form) * u;
  if (diff.size() > 0 && diff.cwiseAbs().maxCoeff() > 1e-9) return "two-form additivity" + ctx;
  return std::nullopt;
}

Result bowtie_pullback(std::mt19937_64& rng, Index n) {
  const LinearDirac a = random_dirac(rng, n, 3), b = random_dirac(rng, n, 3);
  if (!equals(bowtie(a, b), bowtie_via_pullback(a, b))) {
    return "bowtie != pullback for a: " + describe(a) + ", b: " + describe(b);
  }
  return std::nullopt;
}

Result composition(std::mt19937_64& rng, Index size) {
  const Index ns = size, n1 = uniform_index(rng, 1, 3), n2 = uniform_index(rng, 1, 3);
  const std::array<Index, 3> dims{n1, ns, n2};
  const LinearDirac d1 = random_dirac(rng, n1 + ns), d2 = random_dirac(rng, ns + n2);
  const LinearDirac lhs = pushforward(bowtie(direct_sum(d1, d2), port_interconnection(dims)),
                                      port_projection(dims));
  if (!equals(lhs, compose(d1, d2, dims))) {
    return "pushforward of bowtie != compose for d1: " + describe(d1) + ", d2: " + describe(d2);
  }
  return std::nullopt;
}

Result two_form_roundtrip(std::mt19937_64& rng, Index n) {
  const LinearDirac d = random_dirac(rng, n);
  const TwoFormOnDistribution tf = extract_two_form(d);
  if ((tf.form + tf.form.transpose()).cwiseAbs().maxCoeff() > 1e-12) return "form not skew for " + describe(d);
  if (!equals(from_form_and_distribution(tf), d)) return "round trip failed for " + describe(d);
  return std::nullopt;
}

Result induced_identity(std::mt19937_64& rng, Index idx) {
  const auto& t = list_builtins()[static_cast<std::size_t>(idx - 1)];
  const LagrangeDiracSystem sys = build_builtin(t.name);
  const Index n = sys.config_dim();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    Vector q(n), p(n);
    for (Index i = 0; i < n; ++i) q(i) = u(rng), p(i) = u(rng);
    if (!equals(interconnect_at(sys.constraints, q, p),
                interconnect_reference_at(sys.constraints, q, p))) {
      return t.name + ": interconnection differs from the induced structure at q=" +
             describe(q.transpose()) + " p=" + describe(p.transpose());
    }
  }
  // Local formula against the form-and-distribution construction.
  const Matrix w = random_matrix(rng, uniform_index(rng, 0, n), n, 2);
  const auto field = w.rows() ? DistributionField::constant(w) : DistributionField::unconstrained(n);
  const Vector z = Vector::Zero(n);
  if (!equals(induced_dirac_at(field, z, z),
              from_form_and_distribution({lift_to_cotangent(field, z, z), canonical_form(n)}))) {
    return "induced structure differs from the canonical form construction for rows " + describe(w);
  }
  return std::nullopt;
}

Result gradient_check(std::mt19937_64& rng, Index idx) {
  const auto& t = list_builtins()[static_cast<std::size_t>(idx - 1)];
  const LagrangeDiracSystem sys = build_builtin(t.name);
  const Index n = sys.config_dim();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Vector q(n), v(n);
    for (Index i = 0; i < n; ++i) q(i) = u(rng), v(i) = u(rng);
    const Vector gq = sys.lagrangian.grad_q(q, v), gv = sys.lagrangian.grad_v(q, v);
    const Vector fq = sys.lagrangian.grad_q_fd(q, v), fv = sys.lagrangian.grad_v_fd(q, v);
    const double eq = (gq - fq).norm() / std::max(1.0, fq.norm());
    const double ev = (gv - fv).norm() / std::max(1.0, fv.norm());
    if (eq > 1e-6 || ev > 1e-6) {
      return t.name + ": gradient mismatch " + std::to_string(std::max(eq, ev)) + " at q=" +
             describe(q.transpose()) + " v=" + describe(v.transpose());
    }
  }
  return std::nullopt;
}

double harmonic_error(Scheme scheme, double h) {
  LagrangeDiracSystem sys = build_builtin("harmonic");
  IntegratorConfig cfg;
  cfg.scheme = scheme;
  cfg.h = h;
  const PontryaginState s0 = initialize(sys, Vector::Ones(1), Vector::Zero(1), cfg);
  const SimulationResult r = simulate(sys, s0, cfg, 10.0);
  double err = 0.0;
  for (const auto& s : r.trajectory.states) err = std::max(err, std::abs(s.q(0) - std::cos(s.t)));
  return r.ok ? err : INFINITY;
}

Result convergence(std::mt19937_64&, Index idx) {
  const Scheme scheme = idx == 1 ? Scheme::ImplicitMidpoint : Scheme::BackwardEuler;
  const double lo = idx == 1 ? 3.5 : 1.8, hi = idx == 1 ? 4.5 : 2.2;
  const double ratio = harmonic_error(scheme, 0.01) / harmonic_error(scheme, 0.005);
  if (!(ratio >= lo && ratio <= hi)) {
    return scheme_name(scheme) + ": error ratio " + std::to_string(ratio) + " outside [" +
           std::to_string(lo) + ", " + std::to_string(hi) + "]";
  }
  return std::nullopt;
}

Result config_roundtrip(std::mt19937_64& rng, Index idx) {
  const auto& t = list_builtins()[static_cast<std::size_t>(idx - 1)];
  const nlohmann::json doc = export_builtin(t.name, {}, t.polynomial);
  const SimulationConfig cfg = parse_config(nlohmann::json::parse(doc.dump()));
  const LagrangeDiracSystem a = build_builtin(t.name), b = build_system(cfg.system);
  const Index n = a.config_dim();
  if (b.config_dim() != n || b.multiplier_count() != a.multiplier_count()) {
    return t.name + ": rebuilt system has different shape";
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    Vector q(n), v(n), p(n);
    for (Index i = 0; i < n; ++i) q(i) = u(rng), v(i) = u(rng), p(i) = u(rng);
    const double d = std::abs(a.lagrangian.value(q, v) - b.lagrangian.value(q, v)) +
                     (a.lagrangian.grad_q(q, v) - b.lagrangian.grad_q(q, v)).norm() +
                     (a.lagrangian.grad_v(q, v) - b.lagrangian.grad_v(q, v)).norm() +
                     (a.force(q, v, p) - b.force(q, v, p)).norm() +
                     (a.constraints.stacked_constraints(q) - b.constraints.stacked_constraints(q)).norm();
    if (d > 1e-12) return t.name + ": rebuilt system differs by " + std::to_string(d);
  }
  return std::nullopt;
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& name, int index, Index size) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(std::hash<std::string>{}(name)),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(size)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

Result run_case(const Suite& s, std::uint64_t seed, int index, Index size) {
  std::mt19937_64 rng(case_seed(seed, s.name, index, size));
  try {
    return s.property(rng, size);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

}  // namespace

SuiteResult run_suite(const Suite& suite, std::uint64_t seed) {
  SuiteResult r;
  r.name = suite.name;
  r.total = suite.cases;
  for (int i = 0; i < suite.cases; ++i) {
    const Index size = 1 + i % suite.max_size;
    Result f = run_case(suite, seed, i, size);
    if (!f) {
      ++r.passed;
      continue;
    }
    if (r.failure) continue;
    std::string smallest = "size " + std::to_string(size) + ": " + *f;
    for (Index s = 1; s < size; ++s) {
      bool found = false;
      for (int k = 0; k < 50 && !found; ++k) {
        if (Result g = run_case(suite, seed ^ 0x5eedULL, k, s)) {
          smallest = "size " + std::to_string(s) + ": " + *g;
          found = true;
        }
      }
      if (found) break;
    }
    r.failure = smallest;
  }
  return r;
}

std::vector<Suite> builtin_suites() {
  const Index nb = static_cast<Index>(list_builtins().size());
  return {
      {"subspace laws", 200, 8, subspace_laws},
      {"dirac validity", 200, 6, dirac_validity},
      {"bowtie laws", 100, 5, bowtie_laws},
      {"bowtie equals pullback", 100, 4, bowtie_pullback},
      {"composition as push-forward", 60, 3, composition},
      {"two-form round trip", 100, 6, two_form_roundtrip},
      {"induced interconnection", static_cast<int>(nb), nb, induced_identity},
      {"gradient checks", static_cast<int>(nb), nb, gradient_check},
      {"convergence order", 2, 2, convergence},
      {"config round trip", static_cast<int>(nb), nb, config_roundtrip},
  };
}

int cmd_selftest(std::uint64_t seed, std::ostream& out, std::ostream&) {
  const std::vector<Suite> suites = builtin_suites();
  std::vector<std::future<SuiteResult>> jobs;
  for (const auto& s : suites) {
    jobs.push_back(std::async(std::launch::async, [&s, seed] { return run_suite(s, seed); }));
  }
  int failed = 0;
  out << "selftest seed " << seed << ", " << suites.size() << " suites\n";
  for (auto& j : jobs) {
    const SuiteResult r = j.get();
    out << (r.failure ? "[FAIL] " : "[PASS] ") << r.name << ": " << r.passed << "/" << r.total << '\n';
    if (r.failure) {
      ++failed;
      out << "  minimal failing case (" << *r.failure << ")\n";
    }
  }
  out << (failed ? "selftest: FAILED (" + std::to_string(failed) + " suites)\n" : "selftest: all suites passed\n");
  return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace dirac
