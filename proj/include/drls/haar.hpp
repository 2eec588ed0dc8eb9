#pragma once

#include <cstdint>
#include <random>

#include "drls/dense_matrix.hpp"

namespace drls {

/// n x k matrix with orthonormal columns distributed by the Haar measure on
/// the orthogonal group: QR of a standard Gaussian matrix with each Q column
/// multiplied by the sign of the corresponding R diagonal entry.
DenseMatrix haar_orthonormal(std::size_t n, std::size_t k, std::mt19937_64& eng);

/// Rank-k orthogonal projection X = Q_k Q_kᵀ from a Haar-distributed basis.
/// Deterministic for a given seed.
DenseMatrix haar_projection(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace drls
