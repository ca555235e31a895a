#include "dirac/subspace.hpp"

#include <algorithm>
#include <string>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

Index rank_from_singular_values(const Vector& sv, double rank_tol, double scale = 0.0) {
  if (sv.size() == 0) return 0;
  const double smax = std::max(sv.maxCoeff(), scale);
  if (!(smax > 0.0)) return 0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * smax) ++r;
  }
  return r;
}

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " +
                            std::to_string(a.ambient_dim()) + " and " +
                            std::to_string(b.ambient_dim()) + " differ");
  }
}

}  // namespace

Subspace::Subspace(Index ambient_dim, Matrix basis, double rank_tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), rank_tol_(rank_tol) {}

Subspace Subspace::span(const Matrix& columns, double rank_tol, double scale) {
  const Index n = columns.rows();
  if (n <= 0) throw std::invalid_argument("span: ambient dimension must be positive");
  if (columns.cols() == 0) return zero(n, rank_tol);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Index r = rank_from_singular_values(svd.singularValues(), rank_tol, scale);
  return Subspace(n, svd.matrixU().leftCols(r), rank_tol);
}

Subspace Subspace::kernel(const Matrix& rows, double rank_tol) {
  const Index n = rows.cols();
  if (n <= 0) throw std::invalid_argument("kernel: ambient dimension must be positive");
  if (rows.rows() == 0) return full(n, rank_tol);
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const Index r = rank_from_singular_values(svd.singularValues(), rank_tol);
  return Subspace(n, svd.matrixV().rightCols(n - r), rank_tol);
}

Subspace Subspace::zero(Index ambient_dim, double rank_tol) {
  if (ambient_dim <= 0) throw std::invalid_argument("zero: ambient dimension must be positive");
  return Subspace(ambient_dim, Matrix(ambient_dim, 0), rank_tol);
}

Subspace Subspace::full(Index ambient_dim, double rank_tol) {
  if (ambient_dim <= 0) throw std::invalid_argument("full: ambient dimension must be positive");
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim), rank_tol);
}

double Subspace::residual(const Vector& v) const {
  if (v.size() != ambient_dim_) {
    throw DimensionMismatch("contains: vector length " + std::to_string(v.size()) +
                            " does not match ambient dimension " +
                            std::to_string(ambient_dim_));
  }
  if (dim() == 0) return v.norm();
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

bool Subspace::contains(const Vector& v) const {
  return residual(v) <= rank_tol_ * std::max(1.0, v.norm());
}

Index numeric_rank(const Matrix& m, double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), rank_tol);
}

Subspace annihilator(const Subspace& a) {
  return Subspace::kernel(a.basis().transpose(), a.rank_tol());
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "intersect");
  const Subspace ann_a = annihilator(a);
  const Subspace ann_b = annihilator(b);
  Matrix stacked(ann_a.dim() + ann_b.dim(), a.ambient_dim());
  stacked << ann_a.basis().transpose(), ann_b.basis().transpose();
  return Subspace::kernel(stacked, std::max(a.rank_tol(), b.rank_tol()));
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "sum");
  Matrix cols(a.ambient_dim(), a.dim() + b.dim());
  cols << a.basis(), b.basis();
  return Subspace::span(cols, std::max(a.rank_tol(), b.rank_tol()));
}

Subspace image(const Matrix& m, const Subspace& a) {
  if (m.cols() != a.ambient_dim()) {
    throw DimensionMismatch("image: map has " + std::to_string(m.cols()) +
                            " columns, subspace lives in dimension " +
                            std::to_string(a.ambient_dim()));
  }
  const double scale = m.size() ? Eigen::JacobiSVD<Matrix>(m).singularValues()(0) : 0.0;
  return Subspace::span(m * a.basis(), a.rank_tol(), scale);
}

bool equals(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "equals");
  if (a.dim() != b.dim()) return false;
  const double tol = std::max(a.rank_tol(), b.rank_tol());
  for (Index j = 0; j < a.dim(); ++j) {
    if (b.residual(a.basis().col(j)) > tol) return false;
  }
  for (Index j = 0; j < b.dim(); ++j) {
    if (a.residual(b.basis().col(j)) > tol) return false;
  }
  return true;
}

}  // namespace dirac
