#include <gtest/gtest.h>

#include <random>

#include "dirac/errors.hpp"
#include "dirac/linear_dirac.hpp"
#include "dirac/random.hpp"
#include "oracle/exact_rational.hpp"

namespace dirac {
namespace {

Matrix column(std::initializer_list<double> xs) {
  Matrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

Vector vec(std::initializer_list<double> xs) { return column(xs).col(0); }

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

LinearDirac constraint_structure(const Subspace& delta) {
  return from_form_and_distribution({delta, Matrix::Zero(delta.ambient_dim(), delta.ambient_dim())});
}

TEST(PairingOrthogonal, ZeroGivesFullSpace) {
  EXPECT_EQ(pairing_orthogonal(Subspace::zero(4)).dim(), 4);
}

TEST(PairingOrthogonal, CanonicalIsSelfOrthogonal) {
  // Brute force from the bilinear form: the orthogonal of a spanning set is
  // the kernel of (G S)^T.
  const LinearDirac c = canonical_dirac(1);
  const Matrix g = pairing_matrix(2);
  EXPECT_TRUE(equals(Subspace::kernel(c.subspace().basis().transpose() * g), c.subspace()));
  EXPECT_TRUE(equals(pairing_orthogonal(c.subspace()), c.subspace()));
}

TEST(PairingOrthogonal, VelocityBlockIsSelfOrthogonal) {
  const Subspace s = identity_structure(3).subspace();
  EXPECT_TRUE(equals(pairing_orthogonal(s), s));
}

TEST(FromForm, ConstraintOnFirstAxis) {
  const LinearDirac d = constraint_structure(Subspace::span(column({1, 0})));
  EXPECT_EQ(d.subspace().dim(), 2);
  EXPECT_TRUE(d.contains(vec({1, 0}), vec({0, 0})));
  EXPECT_TRUE(d.contains(vec({0, 0}), vec({0, 1})));
  EXPECT_FALSE(d.contains(vec({0, 1}), vec({0, 0})));
}

TEST(FromForm, CanonicalPhaseSpace) {
  // Elements ((qdot, pdot), (-pdot, qdot)).
  const LinearDirac d = from_form_and_distribution({Subspace::full(2), canonical_form(1)});
  EXPECT_TRUE(d.contains(vec({1, 0}), vec({0, 1})));
  EXPECT_TRUE(d.contains(vec({0, 1}), vec({-1, 0})));
  EXPECT_FALSE(d.contains(vec({0, 1}), vec({1, 0})));
}

TEST(FromForm, DiagonalKernelWithZeroForm) {
  const Subspace delta = Subspace::kernel(Matrix(column({1, -1}).transpose()));
  const LinearDirac d = constraint_structure(delta);
  EXPECT_EQ(d.subspace().dim(), 2);
  EXPECT_TRUE(d.contains(vec({1, 1}), vec({1, -1})));
  const Matrix& b = d.subspace().basis();
  EXPECT_LT((b.transpose() * pairing_matrix(2) * b).norm(), 1e-12);
}

TEST(FromForm, RejectsNonSkewForm) {
  Matrix sym(2, 2);
  sym << 1, 0, 0, 1;
  EXPECT_THROW(from_form_and_distribution({Subspace::full(2), sym}), std::invalid_argument);
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate_dirac(canonical_dirac(1).subspace()));
  EXPECT_FALSE(validate_dirac(Subspace::span(column({1, 1}))));
  Matrix sym(2, 2);
  sym << 2, 1, 1, 3;
  Matrix graph(4, 2);
  graph << Matrix::Identity(2, 2), sym;
  EXPECT_FALSE(validate_dirac(Subspace::span(graph)));
  EXPECT_FALSE(validate_dirac(Subspace::zero(4)));
  EXPECT_THROW(LinearDirac(1, Subspace::span(column({1, 1}))), NotDirac);
}

TEST(DirectSum, CanonicalBlocks) {
  EXPECT_TRUE(equals(direct_sum(canonical_dirac(1), canonical_dirac(1)),
                     from_form_and_distribution(
                         {Subspace::full(4), block_diag(canonical_form(1), canonical_form(1))})));
  EXPECT_TRUE(equals(direct_sum(identity_structure(2), identity_structure(3)), identity_structure(5)));
}

TEST(DirectSum, ConstraintStructures) {
  const Subspace d1 = Subspace::span(column({1, 2})), d2 = Subspace::span(column({0, 1, 1}));
  const Subspace prod = Subspace::span(block_diag(d1.basis(), d2.basis()));
  EXPECT_TRUE(equals(direct_sum(constraint_structure(d1), constraint_structure(d2)),
                     constraint_structure(prod)));
}

TEST(Bowtie, IdentityLaw) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const Index n = 1 + k % 5;
    const LinearDirac d = random_dirac(rng, n);
    EXPECT_TRUE(equals(bowtie(d, identity_structure(n)), d));
  }
}

TEST(Bowtie, ConstraintStructuresIntersect) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const Index n = 1 + k % 5;
    const Subspace a = random_subspace(rng, n, std::uniform_int_distribution<Index>(0, n)(rng));
    const Subspace b = random_subspace(rng, n, std::uniform_int_distribution<Index>(0, n)(rng));
    EXPECT_TRUE(equals(bowtie(constraint_structure(a), constraint_structure(b)),
                       constraint_structure(intersect(a, b))));
  }
}

TEST(Bowtie, GraphsAddForms) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 30; ++k) {
    const Index n = 1 + k % 5;
    const Matrix fa = random_skew(rng, n), fb = random_skew(rng, n);
    const LinearDirac ga = from_form_and_distribution({Subspace::full(n), fa});
    const LinearDirac gb = from_form_and_distribution({Subspace::full(n), fb});
    EXPECT_TRUE(equals(bowtie(ga, gb), from_form_and_distribution({Subspace::full(n), fa + fb})));
  }
  const LinearDirac c = canonical_dirac(2);
  const LinearDirac twice = from_form_and_distribution({Subspace::full(4), 2 * canonical_form(2)});
  EXPECT_TRUE(equals(bowtie(c, c), twice));
  EXPECT_TRUE(equals(bowtie_via_pullback(c, c), twice));
}

TEST(Bowtie, VelocityProjectionIsIntersection) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const Index n = 1 + k % 5;
    const LinearDirac a = random_dirac(rng, n), b = random_dirac(rng, n);
    EXPECT_TRUE(equals(bowtie(a, b).velocity_projection(),
                       intersect(a.velocity_projection(), b.velocity_projection())));
  }
}

TEST(Bowtie, MatchesExactEliminationOnIntegerInputs) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 40; ++k) {
    const Index n = 1 + k % 4;
    oracle::ColumnSet exact[2];
    LinearDirac numeric[2] = {identity_structure(n), identity_structure(n)};
    for (int s = 0; s < 2; ++s) {
      const Index r = std::uniform_int_distribution<Index>(0, n)(rng);
      const Matrix basis = random_matrix(rng, n, r, 3);
      const Matrix form = random_skew(rng, n, 2);
      numeric[s] = from_form_and_distribution({Subspace::span(basis), form});
      exact[s] = oracle::dirac_from_form(oracle::from_eigen(basis), static_cast<std::size_t>(r),
                                         oracle::from_eigen(form), static_cast<std::size_t>(n));
    }
    const oracle::ColumnSet e = oracle::bowtie(exact[0], exact[1]);
    EXPECT_EQ(oracle::span_dim(e), static_cast<std::size_t>(n));
    EXPECT_TRUE(oracle::isotropic(e));
    const LinearDirac got = bowtie(numeric[0], numeric[1]);
    EXPECT_TRUE(equals(Subspace::span(oracle::columns_to_eigen(e)), got.subspace()));
    EXPECT_TRUE(equals(got, bowtie_via_pullback(numeric[0], numeric[1])));
  }
}

TEST(Bowtie, DimensionMismatchThrows) {
  EXPECT_THROW(bowtie(identity_structure(2), identity_structure(3)), DimensionMismatch);
}

TEST(ExtractTwoForm, ConstraintStructureHasZeroForm) {
  const Subspace delta = Subspace::span(column({1, 1, 0}));
  const TwoFormOnDistribution tf = extract_two_form(constraint_structure(delta));
  EXPECT_TRUE(equals(tf.distribution, delta));
  EXPECT_LT(tf.form.norm(), 1e-12);
}

TEST(ExtractTwoForm, CanonicalRecoversForm) {
  const TwoFormOnDistribution tf = extract_two_form(canonical_dirac(2));
  EXPECT_EQ(tf.distribution.dim(), 4);
  EXPECT_LT((tf.form - canonical_form(2)).norm(), 1e-12);
}

TEST(ExtractTwoForm, RoundTrip) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    const LinearDirac d = random_dirac(rng, 1 + k % 6);
    const TwoFormOnDistribution tf = extract_two_form(d);
    EXPECT_LT((tf.form + tf.form.transpose()).norm(), 1e-12);
    EXPECT_TRUE(equals(from_form_and_distribution(tf), d));
  }
}

TEST(Compose, EmptyPortIsDirectSum) {
  std::mt19937_64 rng(13);
  const LinearDirac d1 = random_dirac(rng, 2), d2 = random_dirac(rng, 3);
  EXPECT_TRUE(equals(compose(d1, d2, {2, 0, 3}), direct_sum(d1, d2)));
}

TEST(Compose, PushforwardOfInterconnection) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 50; ++k) {
    const std::array<Index, 3> dims{1 + k % 3, 1 + (k / 3) % 3, 1 + (k / 9) % 3};
    const LinearDirac d1 = random_dirac(rng, dims[0] + dims[1]);
    const LinearDirac d2 = random_dirac(rng, dims[1] + dims[2]);
    const LinearDirac lhs =
        pushforward(bowtie(direct_sum(d1, d2), port_interconnection(dims)), port_projection(dims));
    EXPECT_TRUE(equals(lhs, compose(d1, d2, dims)));
  }
}

TEST(Compose, CanonicalThroughVelocityPort) {
  // V1 = Vs = V2 = R; d2 is the identity structure on Vs x V2, so the port
  // carries velocities only and exchanges no effort.
  const LinearDirac d1 = canonical_dirac(1);
  const LinearDirac d2 = identity_structure(2);
  const LinearDirac c = compose(d1, d2, {1, 1, 1});
  // Brute force: (v1, v2, a1, a2) with (v1, vs, a1, as) in d1 and
  // (-vs, v2, as, a2) in d2 forces as = a2 = 0, hence v1 = 0 and vs = a1 free
  // with v2 free.
  EXPECT_TRUE(c.contains(vec({0, 1}), vec({0, 0})));
  EXPECT_TRUE(c.contains(vec({0, 0}), vec({1, 0})));
  EXPECT_FALSE(c.contains(vec({1, 0}), vec({0, 0})));
  EXPECT_THROW(compose(d1, d2, {1, 2, 1}), DimensionMismatch);
}

TEST(Pushforward, IdentityMapKeepsStructure) {
  std::mt19937_64 rng(15);
  const LinearDirac d = random_dirac(rng, 4);
  EXPECT_TRUE(equals(pushforward(d, Matrix::Identity(4, 4)), d));
}

TEST(Pushforward, ZeroMapOnIdentityStructure) {
  // The image of TM ⊕ {0} under 0: R -> R has velocities {0} and covectors
  // pulled back to zero, i.e. {0} ⊕ R*.
  const LinearDirac d = pushforward(identity_structure(1), Matrix::Zero(1, 1));
  EXPECT_EQ(d.velocity_projection().dim(), 0);
  EXPECT_TRUE(d.contains(vec({0}), vec({1})));
}

TEST(IdentityStructure, VelocityBlock) {
  const LinearDirac d = identity_structure(1);
  EXPECT_TRUE(d.contains(vec({1}), vec({0})));
  EXPECT_FALSE(d.contains(vec({0}), vec({1})));
  EXPECT_TRUE(validate_dirac(identity_structure(4).subspace()));
}

TEST(Random, ValidityOverManyDraws) {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 200; ++k) {
    const Index n = 1 + k % 6;
    const LinearDirac d = random_dirac(rng, n);
    EXPECT_EQ(d.subspace().dim(), n);
    EXPECT_TRUE(equals(pairing_orthogonal(d.subspace()), d.subspace()));
  }
}

}  // namespace
}  // namespace dirac
