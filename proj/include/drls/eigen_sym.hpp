#pragma once

#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls {

/// Eigenvalues of a symmetric matrix, sorted non-increasing (cyclic Jacobi).
/// Symmetry is the caller's responsibility; only the upper triangle is trusted
/// after internal symmetrization of rounding noise.
std::vector<double> symmetric_eigenvalues(DenseMatrix m);

/// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm_symmetric(const DenseMatrix& m);

}  // namespace drls
