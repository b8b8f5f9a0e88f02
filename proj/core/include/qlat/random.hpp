#pragma once

#include <cstdint>
#include <random>

#include "qlat/linalg.hpp"

namespace qlat {

using Rng = std::mt19937_64;

/// Derives an independent stream seed for task `index` of a run seeded
/// with `seed` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Standard complex Gaussian vector (real and imaginary parts N(0, 1/2)).
Vector random_gaussian_vector(int n, Rng& rng);
Matrix random_gaussian_matrix(int rows, int cols, Rng& rng);

/// Haar-random unit vector.
Vector random_unit_vector(int n, Rng& rng);

/// GUE-style Hermitian matrix scaled to unit Frobenius norm.
Matrix random_hermitian_matrix(int n, Rng& rng);

/// Uniform point of the probability simplex (flat Dirichlet).
RealVector random_simplex(int n, Rng& rng);

}  // namespace qlat
