#pragma once

#include <array>

#include "dirac/subspace.hpp"

namespace dirac {

/// A Dirac structure on V ⊕ V* at a single point.
///
/// Vectors of the ambient 2n-dimensional space are stored as (v, alpha): the
/// first n entries are the velocity part, the last n the covector part.
class LinearDirac {
 public:
  /// Validates `s` and throws NotDirac if it is not maximal isotropic.
  LinearDirac(Index base_dim, Subspace s);

  Index base_dim() const { return n_; }
  const Subspace& subspace() const { return s_; }
  /// Velocity projection pr_V(D) as a subspace of V.
  Subspace velocity_projection() const;
  bool contains(const Vector& v, const Vector& alpha) const;

 private:
  Index n_;
  Subspace s_;
};

/// Restriction of a skew form to a distribution. `form` is the n x n matrix
/// F of the flat map, alpha = F v, so that Omega(v1, v2) = v2^T F v1.
struct TwoFormOnDistribution {
  Subspace distribution;
  Matrix form;
};

inline constexpr double kIsotropyTol = 1e-10;

/// The matrix of the symmetric pairing <<(v,a),(w,b)>> = <a,w> + <b,v>.
Matrix pairing_matrix(Index n);
Subspace pairing_orthogonal(const Subspace& s);
bool validate_dirac(const Subspace& s);

LinearDirac from_form_and_distribution(const TwoFormOnDistribution& d);
LinearDirac identity_structure(Index n);
/// Graph of the canonical symplectic form on R^{2k} in (q, p) ordering.
Matrix canonical_form(Index k);
LinearDirac canonical_dirac(Index k);

LinearDirac direct_sum(const LinearDirac& d1, const LinearDirac& d2);
LinearDirac bowtie(const LinearDirac& da, const LinearDirac& db);
LinearDirac bowtie_via_pullback(const LinearDirac& da, const LinearDirac& db);
TwoFormOnDistribution extract_two_form(const LinearDirac& d);

/// Composition across a shared port. `d1` lives on V1 x Vs, `d2` on Vs x V2;
/// dims = {dim V1, dim Vs, dim V2}.
LinearDirac compose(const LinearDirac& d1, const LinearDirac& d2,
                    const std::array<Index, 3>& dims);
/// Push-forward along phi: U -> W (phi is dim W x dim U).
LinearDirac pushforward(const LinearDirac& d, const Matrix& phi);

/// Port interconnection Delta_int ⊕ Delta_int° with
/// Delta_int = {(v1, vs, -vs, v2)} on V1 x Vs x Vs x V2. Pushing the bowtie
/// with it forward along port_projection gives compose().
LinearDirac port_interconnection(const std::array<Index, 3>& dims);
/// Projection (v1, vs, vs', v2) -> (v1, v2).
Matrix port_projection(const std::array<Index, 3>& dims);

bool equals(const LinearDirac& a, const LinearDirac& b);

}  // namespace dirac
