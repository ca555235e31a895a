#include "dirac/linear_dirac.hpp"

#include <string>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

// Builds a LinearDirac from an elimination result, where failure can only
// come from a bug in the elimination itself.
LinearDirac checked(Index n, const Subspace& s, const char* op) {
  if (s.dim() != n || !validate_dirac(s)) {
    throw InternalError(std::string(op) + ": result has dimension " +
                        std::to_string(s.dim()) + ", expected " + std::to_string(n));
  }
  return LinearDirac(n, s);
}

// Rows spanning the annihilator of a Dirac structure, split as [A_v, A_alpha].
Matrix annihilator_rows(const LinearDirac& d) {
  return annihilator(d.subspace()).basis().transpose();
}

}  // namespace

LinearDirac::LinearDirac(Index base_dim, Subspace s) : n_(base_dim), s_(std::move(s)) {
  if (n_ <= 0) throw DimensionMismatch("LinearDirac: base dimension must be positive");
  if (s_.ambient_dim() != 2 * n_) {
    throw DimensionMismatch("LinearDirac: ambient dimension " +
                            std::to_string(s_.ambient_dim()) + " is not 2*" +
                            std::to_string(n_));
  }
  if (!validate_dirac(s_)) {
    throw NotDirac("subspace of dimension " + std::to_string(s_.dim()) +
                   " in R^" + std::to_string(2 * n_) + " is not maximal isotropic");
  }
}

Subspace LinearDirac::velocity_projection() const {
  return Subspace::span(s_.basis().topRows(n_), s_.rank_tol(), 1.0);
}

bool LinearDirac::contains(const Vector& v, const Vector& alpha) const {
  if (v.size() != n_ || alpha.size() != n_) {
    throw DimensionMismatch("LinearDirac::contains: expected vectors of length " +
                            std::to_string(n_));
  }
  Vector x(2 * n_);
  x << v, alpha;
  return s_.contains(x);
}

Matrix pairing_matrix(Index n) {
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n).setIdentity();
  g.bottomLeftCorner(n, n).setIdentity();
  return g;
}

Subspace pairing_orthogonal(const Subspace& s) {
  if (s.ambient_dim() % 2 != 0) {
    throw DimensionMismatch("pairing_orthogonal: odd ambient dimension " +
                            std::to_string(s.ambient_dim()));
  }
  const Matrix g = pairing_matrix(s.ambient_dim() / 2);
  return Subspace::kernel(s.basis().transpose() * g, s.rank_tol());
}

bool validate_dirac(const Subspace& s) {
  if (s.ambient_dim() % 2 != 0) {
    throw DimensionMismatch("validate_dirac: odd ambient dimension " +
                            std::to_string(s.ambient_dim()));
  }
  const Index n = s.ambient_dim() / 2;
  if (s.dim() != n) return false;
  const Matrix gram = s.basis().transpose() * pairing_matrix(n) * s.basis();
  if (gram.cwiseAbs().maxCoeff() > kIsotropyTol) return false;
  return equals(pairing_orthogonal(s), s);
}

LinearDirac from_form_and_distribution(const TwoFormOnDistribution& d) {
  const Index n = d.distribution.ambient_dim();
  if (d.form.rows() != n || d.form.cols() != n) {
    throw DimensionMismatch("from_form_and_distribution: form is " +
                            std::to_string(d.form.rows()) + "x" +
                            std::to_string(d.form.cols()) + ", distribution lives in R^" +
                            std::to_string(n));
  }
  const double scale = std::max(1.0, d.form.cwiseAbs().maxCoeff());
  if ((d.form + d.form.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("from_form_and_distribution: form is not skew-symmetric");
  }
  const Matrix& u = d.distribution.basis();
  const Matrix eta = annihilator(d.distribution).basis();
  Matrix cols = Matrix::Zero(2 * n, u.cols() + eta.cols());
  cols.topLeftCorner(n, u.cols()) = u;
  cols.bottomLeftCorner(n, u.cols()) = d.form * u;
  cols.bottomRightCorner(n, eta.cols()) = eta;
  return LinearDirac(n, Subspace::span(cols, d.distribution.rank_tol()));
}

LinearDirac identity_structure(Index n) {
  if (n < 1) throw DimensionMismatch("identity_structure: n must be at least 1");
  Matrix cols = Matrix::Zero(2 * n, n);
  cols.topRows(n).setIdentity();
  return LinearDirac(n, Subspace::span(cols));
}

Matrix canonical_form(Index k) {
  Matrix f = Matrix::Zero(2 * k, 2 * k);
  f.topRightCorner(k, k) = -Matrix::Identity(k, k);
  f.bottomLeftCorner(k, k).setIdentity();
  return f;
}

LinearDirac canonical_dirac(Index k) {
  return from_form_and_distribution({Subspace::full(2 * k), canonical_form(k)});
}

LinearDirac direct_sum(const LinearDirac& d1, const LinearDirac& d2) {
  const Index n1 = d1.base_dim(), n2 = d2.base_dim(), n = n1 + n2;
  const Matrix& b1 = d1.subspace().basis();
  const Matrix& b2 = d2.subspace().basis();
  Matrix cols = Matrix::Zero(2 * n, b1.cols() + b2.cols());
  cols.block(0, 0, n1, b1.cols()) = b1.topRows(n1);
  cols.block(n, 0, n1, b1.cols()) = b1.bottomRows(n1);
  cols.block(n1, b1.cols(), n2, b2.cols()) = b2.topRows(n2);
  cols.block(n + n1, b1.cols(), n2, b2.cols()) = b2.bottomRows(n2);
  return checked(n, Subspace::span(cols), "direct_sum");
}

LinearDirac bowtie(const LinearDirac& da, const LinearDirac& db) {
  const Index n = da.base_dim();
  if (db.base_dim() != n) {
    throw DimensionMismatch("bowtie: base dimensions " + std::to_string(n) + " and " +
                            std::to_string(db.base_dim()) + " differ");
  }
  // Unknowns (v, alpha, beta): (v, alpha + beta) in D_a and (v, -beta) in D_b.
  const Matrix na = annihilator_rows(da);
  const Matrix nb = annihilator_rows(db);
  Matrix rows = Matrix::Zero(na.rows() + nb.rows(), 3 * n);
  rows.block(0, 0, na.rows(), n) = na.leftCols(n);
  rows.block(0, n, na.rows(), n) = na.rightCols(n);
  rows.block(0, 2 * n, na.rows(), n) = na.rightCols(n);
  rows.block(na.rows(), 0, nb.rows(), n) = nb.leftCols(n);
  rows.block(na.rows(), 2 * n, nb.rows(), n) = -nb.rightCols(n);
  const Subspace triples = Subspace::kernel(rows);
  return checked(n, Subspace::span(triples.basis().topRows(2 * n), kDefaultRankTol, 1.0), "bowtie");
}

LinearDirac bowtie_via_pullback(const LinearDirac& da, const LinearDirac& db) {
  const Index n = da.base_dim();
  if (db.base_dim() != n) {
    throw DimensionMismatch("bowtie_via_pullback: base dimensions " + std::to_string(n) +
                            " and " + std::to_string(db.base_dim()) + " differ");
  }
  // D_a ⊕ D_b is laid out as (v_a, v_b, alpha_a, alpha_b).
  const Subspace sum_ab = direct_sum(da, db).subspace();
  Matrix diag_rows = Matrix::Zero(n, 4 * n);
  diag_rows.leftCols(n).setIdentity();
  diag_rows.middleCols(n, n) = -Matrix::Identity(n, n);
  const Subspace on_diagonal = intersect(sum_ab, Subspace::kernel(diag_rows));
  // (v, v, alpha, beta) ~ (v, v, alpha + beta, 0) -> (v, alpha + beta).
  Matrix quotient = Matrix::Zero(2 * n, 4 * n);
  quotient.topLeftCorner(n, n).setIdentity();
  quotient.block(n, 2 * n, n, n).setIdentity();
  quotient.block(n, 3 * n, n, n).setIdentity();
  return checked(n, image(quotient, on_diagonal), "bowtie_via_pullback");
}

TwoFormOnDistribution extract_two_form(const LinearDirac& d) {
  const Index n = d.base_dim();
  const Matrix& b = d.subspace().basis();
  const Subspace delta = d.velocity_projection();
  const Matrix& u = delta.basis();
  // Coefficients c_j with (u_j, alpha_j) = B c_j.
  const Matrix coeffs = b.topRows(n).completeOrthogonalDecomposition().solve(u);
  const Matrix alphas = b.bottomRows(n) * coeffs;
  Matrix w = alphas.transpose() * u;
  w = 0.5 * (w - w.transpose());
  return {delta, u * w.transpose() * u.transpose()};
}

LinearDirac compose(const LinearDirac& d1, const LinearDirac& d2,
                    const std::array<Index, 3>& dims) {
  const auto [n1, ns, n2] = dims;
  if (n1 < 0 || ns < 0 || n2 < 0 || n1 + n2 < 1 || d1.base_dim() != n1 + ns ||
      d2.base_dim() != ns + n2) {
    throw DimensionMismatch("compose: factor dimensions (" + std::to_string(n1) + ", " +
                            std::to_string(ns) + ", " + std::to_string(n2) +
                            ") do not match base dimensions " +
                            std::to_string(d1.base_dim()) + " and " +
                            std::to_string(d2.base_dim()));
  }
  const Index n = n1 + n2;
  // Unknowns (v1, v2, a1, a2, vs, as).
  const Index o_v1 = 0, o_v2 = n1, o_a1 = n, o_a2 = n + n1, o_vs = 2 * n, o_as = 2 * n + ns;
  const Matrix r1 = annihilator_rows(d1);  // columns (v1, vs, a1, as)
  const Matrix r2 = annihilator_rows(d2);  // columns (vs', v2, as', a2)
  const Index m1 = r1.rows(), m2 = r2.rows();
  const Index b1 = n1 + ns, b2 = ns + n2;
  Matrix rows = Matrix::Zero(m1 + m2, 2 * (n + ns));
  rows.block(0, o_v1, m1, n1) = r1.middleCols(0, n1);
  rows.block(0, o_vs, m1, ns) = r1.middleCols(n1, ns);
  rows.block(0, o_a1, m1, n1) = r1.middleCols(b1, n1);
  rows.block(0, o_as, m1, ns) = r1.middleCols(b1 + n1, ns);
  // (-vs, v2, as, a2) in D2.
  rows.block(m1, o_vs, m2, ns) = -r2.middleCols(0, ns);
  rows.block(m1, o_v2, m2, n2) = r2.middleCols(ns, n2);
  rows.block(m1, o_as, m2, ns) = r2.middleCols(b2, ns);
  rows.block(m1, o_a2, m2, n2) = r2.middleCols(b2 + ns, n2);
  const Subspace all = Subspace::kernel(rows);
  return checked(n, Subspace::span(all.basis().topRows(2 * n), kDefaultRankTol, 1.0), "compose");
}

LinearDirac pushforward(const LinearDirac& d, const Matrix& phi) {
  const Index nu = d.base_dim();
  const Index nw = phi.rows();
  if (phi.cols() != nu || nw < 1) {
    throw DimensionMismatch("pushforward: map is " + std::to_string(phi.rows()) + "x" +
                            std::to_string(phi.cols()) + ", structure has base dimension " +
                            std::to_string(nu));
  }
  // Unknowns (v in U, alpha in W*) with (v, phi^T alpha) in d.
  const Matrix r = annihilator_rows(d);
  Matrix rows(r.rows(), nu + nw);
  rows << r.leftCols(nu), r.rightCols(nu) * phi.transpose();
  const Subspace pre = Subspace::kernel(rows);
  Matrix map = Matrix::Zero(2 * nw, nu + nw);
  map.topLeftCorner(nw, nu) = phi;
  map.bottomRightCorner(nw, nw).setIdentity();
  const Subspace s = image(map, pre);
  if (s.dim() != nw || !validate_dirac(s)) {
    throw NotDirac("pushforward: image has dimension " + std::to_string(s.dim()) +
                   " in R^" + std::to_string(2 * nw) + " and is not a Dirac structure");
  }
  return LinearDirac(nw, s);
}

LinearDirac port_interconnection(const std::array<Index, 3>& dims) {
  const auto [n1, ns, n2] = dims;
  const Index n = n1 + 2 * ns + n2;
  Matrix rows = Matrix::Zero(ns, n);
  rows.middleCols(n1, ns).setIdentity();
  rows.middleCols(n1 + ns, ns).setIdentity();
  return from_form_and_distribution({Subspace::kernel(rows), Matrix::Zero(n, n)});
}

Matrix port_projection(const std::array<Index, 3>& dims) {
  const auto [n1, ns, n2] = dims;
  Matrix psi = Matrix::Zero(n1 + n2, n1 + 2 * ns + n2);
  psi.topLeftCorner(n1, n1).setIdentity();
  psi.bottomRightCorner(n2, n2).setIdentity();
  return psi;
}

bool equals(const LinearDirac& a, const LinearDirac& b) {
  return a.base_dim() == b.base_dim() && equals(a.subspace(), b.subspace());
}

}  // namespace dirac
