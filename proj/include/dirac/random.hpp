#pragma once

#include <random>

#include "dirac/linear_dirac.hpp"

namespace dirac {

/// Entries uniform in [-1, 1], or uniform integers in [-range, range] when
/// range > 0.
Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, int range = 0);
Matrix random_skew(std::mt19937_64& rng, Index n, int range = 0);
/// Span of k random vectors in R^n (almost surely of dimension k).
Subspace random_subspace(std::mt19937_64& rng, Index n, Index k, int range = 0);
/// from_form_and_distribution on a random distribution of random rank and a
/// random skew form.
LinearDirac random_dirac(std::mt19937_64& rng, Index n, int range = 0);

}  // namespace dirac
