#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dirac/subspace.hpp"

namespace dirac {

/// coeff * prod_i q_i^{q_exps[i]} * prod_i v_i^{v_exps[i]}
struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> q_exps;
  std::vector<int> v_exps;
};

/// A polynomial term contributing to one covector component of a force.
struct ForceTerm {
  Index component = 0;
  double coeff = 0.0;
  std::vector<int> q_exps;
  std::vector<int> v_exps;
};

class LagrangianModel {
 public:
  using ScalarFn = std::function<double(const Vector&, const Vector&)>;
  using GradFn = std::function<Vector(const Vector&, const Vector&)>;

  static LagrangianModel polynomial(Index n, std::vector<PolyTerm> terms);
  /// Closed form. Missing gradients fall back to central differences.
  static LagrangianModel closed_form(Index n, ScalarFn eval, GradFn grad_q = {},
                                     GradFn grad_v = {});

  Index config_dim() const { return n_; }
  double value(const Vector& q, const Vector& v) const;
  Vector grad_q(const Vector& q, const Vector& v) const;
  Vector grad_v(const Vector& q, const Vector& v) const;

  Vector grad_q_fd(const Vector& q, const Vector& v) const;
  Vector grad_v_fd(const Vector& q, const Vector& v) const;
  /// d(grad_v)/dv and d(grad_v)/dq by central differences of grad_v.
  Matrix hessian_vv(const Vector& q, const Vector& v) const;
  Matrix hessian_vq(const Vector& q, const Vector& v) const;

  const std::optional<std::vector<PolyTerm>>& terms() const { return terms_; }

 private:
  LagrangianModel(Index n, ScalarFn eval, GradFn gq, GradFn gv);

  Index n_;
  ScalarFn eval_;
  GradFn grad_q_;
  GradFn grad_v_;
  std::optional<std::vector<PolyTerm>> terms_;
};

class ForceField {
 public:
  using Fn = std::function<Vector(const Vector&, const Vector&, const Vector&)>;

  static ForceField zero(Index n);
  static ForceField polynomial(Index n, std::vector<ForceTerm> terms);
  static ForceField custom(Index n, Fn fn);

  Index config_dim() const { return n_; }
  Vector operator()(const Vector& q, const Vector& v, const Vector& p) const;
  const std::optional<std::vector<ForceTerm>>& terms() const { return terms_; }

 private:
  ForceField(Index n, Fn fn);

  Index n_;
  Fn fn_;
  std::optional<std::vector<ForceTerm>> terms_;
};

/// Central-difference step cbrt(eps) * max(1, |x|).
double central_step(double x);

}  // namespace dirac
