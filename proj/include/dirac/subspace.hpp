#pragma once

#include <Eigen/Dense>

namespace dirac {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTol = 1e-9;

/// A linear subspace of R^ambient_dim, held as an orthonormal basis.
///
/// Numeric rank is decided from singular values relative to the largest one,
/// using the threshold `rank_tol`. The dual space is identified with the
/// primal through the standard basis, so annihilators live in the same
/// ambient space.
class Subspace {
 public:
  /// Column space of `columns`. A matrix with zero columns yields {0}.
  /// Singular values are compared against rank_tol * max(sigma_max, scale);
  /// pass scale = 1 when the columns are projections of unit vectors, so
  /// that a block of pure roundoff is not mistaken for a direction.
  static Subspace span(const Matrix& columns, double rank_tol = kDefaultRankTol,
                       double scale = 0.0);
  /// Null space of `rows`; rows.cols() is the ambient dimension.
  static Subspace kernel(const Matrix& rows, double rank_tol = kDefaultRankTol);
  static Subspace zero(Index ambient_dim, double rank_tol = kDefaultRankTol);
  static Subspace full(Index ambient_dim, double rank_tol = kDefaultRankTol);

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  double rank_tol() const { return rank_tol_; }

  /// ||v - P v|| <= rank_tol * max(1, ||v||), with P the orthogonal projector.
  bool contains(const Vector& v) const;
  /// Distance from v to the subspace.
  double residual(const Vector& v) const;
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  Subspace(Index ambient_dim, Matrix basis, double rank_tol);

  Index ambient_dim_;
  Matrix basis_;
  double rank_tol_;
};

/// Numeric rank of a matrix with the relative singular-value threshold.
Index numeric_rank(const Matrix& m, double rank_tol = kDefaultRankTol);

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace annihilator(const Subspace& a);
/// Image of `a` under the linear map `m` (m.cols() == a.ambient_dim()).
Subspace image(const Matrix& m, const Subspace& a);
bool equals(const Subspace& a, const Subspace& b);

}  // namespace dirac
