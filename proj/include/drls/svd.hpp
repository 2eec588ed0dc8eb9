#pragma once

#include <cstddef>
#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls {

/// Thin SVD A = U diag(s) Vᵀ with r = min(rows, cols) retained factors.
/// Singular values are non-increasing; u and v have orthonormal columns even
/// when A is rank deficient (null directions are completed).
struct SvdFactors {
    DenseMatrix u;                        // rows x r
    std::vector<double> singular_values;  // length r
    DenseMatrix v;                        // cols x r
    std::size_t numerical_rank = 0;
};

SvdFactors svd(const DenseMatrix& a);

/// Singular values at or below this are treated as zero:
/// max(rows, cols) * machine epsilon * sigma_max.
double rank_cutoff(const SvdFactors& f);

/// U_k S_k V_kᵀ; requires k <= numerical_rank.
DenseMatrix rank_k_truncation(const SvdFactors& f, std::size_t k);

/// Sum of squared singular values beyond the first k; requires k <= min(rows, cols).
double tail_frobenius_sq(const SvdFactors& f, std::size_t k);

/// Moore-Penrose pseudoinverse via the SVD, using the numerical rank.
DenseMatrix pseudoinverse(const DenseMatrix& a);
DenseMatrix pseudoinverse(const SvdFactors& f);

DenseMatrix svd_reconstruct(const SvdFactors& f);

}  // namespace drls
