#include "dirac/lagrangian.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double monomial(const std::vector<int>& qe, const std::vector<int>& ve, const Vector& q,
                const Vector& v) {
  double r = 1.0;
  for (std::size_t i = 0; i < qe.size(); ++i) r *= ipow(q(static_cast<Index>(i)), qe[i]);
  for (std::size_t i = 0; i < ve.size(); ++i) r *= ipow(v(static_cast<Index>(i)), ve[i]);
  return r;
}

// Derivative of the monomial with respect to one variable of one group.
double monomial_partial(const std::vector<int>& qe, const std::vector<int>& ve,
                        const Vector& q, const Vector& v, bool in_q, Index k) {
  const std::vector<int>& exps = in_q ? qe : ve;
  const int e = exps[static_cast<std::size_t>(k)];
  if (e == 0) return 0.0;
  double r = e;
  for (std::size_t i = 0; i < qe.size(); ++i) {
    const int ei = (in_q && static_cast<Index>(i) == k) ? qe[i] - 1 : qe[i];
    r *= ipow(q(static_cast<Index>(i)), ei);
  }
  for (std::size_t i = 0; i < ve.size(); ++i) {
    const int ei = (!in_q && static_cast<Index>(i) == k) ? ve[i] - 1 : ve[i];
    r *= ipow(v(static_cast<Index>(i)), ei);
  }
  return r;
}

void check_exponents(Index n, const std::vector<int>& qe, const std::vector<int>& ve,
                     const char* what) {
  if (static_cast<Index>(qe.size()) != n || static_cast<Index>(ve.size()) != n) {
    throw DimensionMismatch(std::string(what) + ": exponent lists must have length " +
                            std::to_string(n));
  }
  for (int e : qe) {
    if (e < 0) throw std::invalid_argument(std::string(what) + ": negative exponent");
  }
  for (int e : ve) {
    if (e < 0) throw std::invalid_argument(std::string(what) + ": negative exponent");
  }
}

void check_point(Index n, const Vector& q, const Vector& v) {
  if (q.size() != n || v.size() != n) {
    throw DimensionMismatch("Lagrangian: expected q and v of length " + std::to_string(n));
  }
}

template <class F>
Vector central_gradient(F&& f, const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = central_step(x(i));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

template <class F>
Matrix central_jacobian(F&& f, const Vector& x) {
  Matrix j;
  Vector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = central_step(x(i));
    xp(i) = x(i) + h;
    const Vector fp = f(xp);
    xp(i) = x(i) - h;
    const Vector fm = f(xp);
    xp(i) = x(i);
    if (i == 0) j.resize(fp.size(), x.size());
    j.col(i) = (fp - fm) / (2.0 * h);
  }
  return j;
}

}  // namespace

double central_step(double x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
}

LagrangianModel::LagrangianModel(Index n, ScalarFn eval, GradFn gq, GradFn gv)
    : n_(n), eval_(std::move(eval)), grad_q_(std::move(gq)), grad_v_(std::move(gv)) {
  if (n_ <= 0) throw DimensionMismatch("LagrangianModel: config dimension must be positive");
}

LagrangianModel LagrangianModel::polynomial(Index n, std::vector<PolyTerm> terms) {
  for (const auto& t : terms) check_exponents(n, t.q_exps, t.v_exps, "Lagrangian term");
  auto eval = [terms](const Vector& q, const Vector& v) {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * monomial(t.q_exps, t.v_exps, q, v);
    return s;
  };
  auto grad = [terms, n](bool in_q) {
    return [terms, n, in_q](const Vector& q, const Vector& v) {
      Vector g = Vector::Zero(n);
      for (const auto& t : terms) {
        for (Index k = 0; k < n; ++k) {
          g(k) += t.coeff * monomial_partial(t.q_exps, t.v_exps, q, v, in_q, k);
        }
      }
      return g;
    };
  };
  LagrangianModel m(n, eval, grad(true), grad(false));
  m.terms_ = std::move(terms);
  return m;
}

LagrangianModel LagrangianModel::closed_form(Index n, ScalarFn eval, GradFn grad_q,
                                             GradFn grad_v) {
  return LagrangianModel(n, std::move(eval), std::move(grad_q), std::move(grad_v));
}

double LagrangianModel::value(const Vector& q, const Vector& v) const {
  check_point(n_, q, v);
  return eval_(q, v);
}

Vector LagrangianModel::grad_q(const Vector& q, const Vector& v) const {
  check_point(n_, q, v);
  return grad_q_ ? grad_q_(q, v) : grad_q_fd(q, v);
}

Vector LagrangianModel::grad_v(const Vector& q, const Vector& v) const {
  check_point(n_, q, v);
  return grad_v_ ? grad_v_(q, v) : grad_v_fd(q, v);
}

Vector LagrangianModel::grad_q_fd(const Vector& q, const Vector& v) const {
  return central_gradient([&](const Vector& x) { return eval_(x, v); }, q);
}

Vector LagrangianModel::grad_v_fd(const Vector& q, const Vector& v) const {
  return central_gradient([&](const Vector& x) { return eval_(q, x); }, v);
}

Matrix LagrangianModel::hessian_vv(const Vector& q, const Vector& v) const {
  return central_jacobian([&](const Vector& x) { return grad_v(q, x); }, v);
}

Matrix LagrangianModel::hessian_vq(const Vector& q, const Vector& v) const {
  return central_jacobian([&](const Vector& x) { return grad_v(x, v); }, q);
}

ForceField::ForceField(Index n, Fn fn) : n_(n), fn_(std::move(fn)) {
  if (n_ <= 0) throw DimensionMismatch("ForceField: config dimension must be positive");
}

ForceField ForceField::zero(Index n) {
  ForceField f(n, [n](const Vector&, const Vector&, const Vector&) { return Vector::Zero(n); });
  f.terms_ = std::vector<ForceTerm>{};
  return f;
}

ForceField ForceField::polynomial(Index n, std::vector<ForceTerm> terms) {
  for (const auto& t : terms) {
    check_exponents(n, t.q_exps, t.v_exps, "force term");
    if (t.component < 0 || t.component >= n) {
      throw DimensionMismatch("force term: component " + std::to_string(t.component) +
                              " out of range");
    }
  }
  ForceField f(n, [terms, n](const Vector& q, const Vector& v, const Vector&) {
    Vector out = Vector::Zero(n);
    for (const auto& t : terms) out(t.component) += t.coeff * monomial(t.q_exps, t.v_exps, q, v);
    return out;
  });
  f.terms_ = std::move(terms);
  return f;
}

ForceField ForceField::custom(Index n, Fn fn) { return ForceField(n, std::move(fn)); }

Vector ForceField::operator()(const Vector& q, const Vector& v, const Vector& p) const {
  Vector f = fn_(q, v, p);
  if (f.size() != n_) {
    throw DimensionMismatch("force field returned length " + std::to_string(f.size()) +
                            ", expected " + std::to_string(n_));
  }
  return f;
}

}  // namespace dirac
