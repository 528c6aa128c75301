#pragma once

#include "qubitfield/operator_core.hpp"

#include <cstdint>
#include <random>

namespace qubitfield {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0;

/// Entries i.i.d. standard complex Gaussian.
Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);

/// (G + G^dagger)/2 with G complex Gaussian.
Matrix random_hermitian(std::size_t n, Rng& rng);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
Matrix random_unitary(std::size_t n, Rng& rng);

/// G G^dagger / Tr, full rank with probability one.
Matrix random_density(std::size_t n, Rng& rng);

/// Normalized Gaussian vector.
Eigen::VectorXcd random_state(std::size_t n, Rng& rng);

OperatorTriple random_hermitian_triple(std::size_t n, Rng& rng);

} // namespace qubitfield
