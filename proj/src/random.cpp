#include "dirac/random.hpp"

namespace dirac {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, int range) {
  Matrix m(rows, cols);
  if (range > 0) {
    std::uniform_int_distribution<int> d(-range, range);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  } else {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  }
  return m;
}

Matrix random_skew(std::mt19937_64& rng, Index n, int range) {
  const Matrix a = random_matrix(rng, n, n, range);
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      s(i, j) = a(i, j);
      s(j, i) = -a(i, j);
    }
  return s;
}

Subspace random_subspace(std::mt19937_64& rng, Index n, Index k, int range) {
  return Subspace::span(random_matrix(rng, n, k, range));
}

LinearDirac random_dirac(std::mt19937_64& rng, Index n, int range) {
  std::uniform_int_distribution<Index> rank(0, n);
  const Subspace delta = random_subspace(rng, n, rank(rng), range);
  return from_form_and_distribution({delta, random_skew(rng, n, range)});
}

}  // namespace dirac
