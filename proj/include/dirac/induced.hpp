#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dirac/linear_dirac.hpp"

namespace dirac {

/// One constraint row whose coefficients are affine in q:
/// row_k(q) = constant_k + sum_j linear_in_q(k, j) * q_j.
struct AffineRow {
  Vector constant;
  Matrix linear_in_q;
};

/// A field of one-forms q -> omega(q) (m x n) with Delta_Q(q) = ker omega(q).
class DistributionField {
 public:
  using Fn = std::function<Matrix(const Vector&)>;

  static DistributionField unconstrained(Index n);
  static DistributionField constant(const Matrix& rows);
  static DistributionField affine(Index n, std::vector<AffineRow> rows);
  /// Arbitrary coefficient function; `fn` must return an m x n matrix.
  static DistributionField custom(Index n, Index m, Fn fn);

  Index config_dim() const { return n_; }
  Index rows() const { return m_; }
  Matrix omega(const Vector& q) const;

  /// Set for fields built from constant or affine rows.
  const std::optional<std::vector<AffineRow>>& affine_rows() const { return affine_; }

 private:
  DistributionField(Index n, Index m, Fn fn);

  Index n_;
  Index m_;
  Fn fn_;
  std::optional<std::vector<AffineRow>> affine_;
};

/// Subsystem distributions on disjoint factors plus a coupling distribution
/// on the product. Subsystem i owns coordinates [offset(i), offset(i) + dim).
class InterconnectionSpec {
 public:
  InterconnectionSpec(std::vector<DistributionField> subsystems, DistributionField coupling);

  const std::vector<DistributionField>& subsystems() const { return subsystems_; }
  const DistributionField& coupling() const { return coupling_; }
  Index config_dim() const { return coupling_.config_dim(); }
  Index offset(std::size_t i) const { return offsets_[i]; }
  Index total_rows() const;
  Index subsystem_rows() const;

  /// Block-diagonal subsystem rows followed by the coupling rows.
  Matrix stacked_constraints(const Vector& q) const;

 private:
  std::vector<DistributionField> subsystems_;
  DistributionField coupling_;
  std::vector<Index> offsets_;
};

/// {(qdot, pdot) : omega(q) qdot = 0} inside R^{2n}.
Subspace lift_to_cotangent(const DistributionField& d, const Vector& q, const Vector& p);
/// Same lift for an explicit row matrix.
Subspace lift_rows(const Matrix& omega);

/// Induced Dirac structure on T*Q at (q, p), base dimension 2n.
LinearDirac induced_dirac_at(const DistributionField& d, const Vector& q, const Vector& p);
/// Delta_int ⊕ Delta_int° for the cotangent lift of the coupling field.
LinearDirac interconnection_dirac_at(const DistributionField& coupling, const Vector& q,
                                     const Vector& p);
/// (D_1 ⊕ ... ⊕ D_k) ⋈ D_int in global (q, p) ordering.
LinearDirac interconnect_at(const InterconnectionSpec& spec, const Vector& q, const Vector& p);
/// Canonical form restricted to the lift of (prod Delta_i) ∩ Delta_c.
LinearDirac interconnect_reference_at(const InterconnectionSpec& spec, const Vector& q,
                                      const Vector& p);

struct RankReport {
  bool constant = true;
  std::vector<Vector> points;
  std::vector<Index> constraint_ranks;
  std::vector<Index> structure_dims;
};

/// Samples `count` points (q, p) uniformly in [-scale, scale] and records
/// constraint ranks and interconnected structure dimensions.
RankReport check_constant_rank(const InterconnectionSpec& spec, std::uint64_t seed,
                               int count = 8, double scale = 1.0);

}  // namespace dirac
