#pragma once

#include <cstddef>
#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls::kernels {

// Serial reference implementations. The default (OpenMP) variants below must
// produce bitwise-identical output: both compute each output element with the
// same inner loop, so only the distribution of elements over threads differs.
namespace serial {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gram_aat(const DenseMatrix& a);
DenseMatrix gram_ata(const DenseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
std::vector<double> matvec_t(const DenseMatrix& a, const std::vector<double>& x);

}  // namespace serial

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gram_aat(const DenseMatrix& a);
DenseMatrix gram_ata(const DenseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
std::vector<double> matvec_t(const DenseMatrix& a, const std::vector<double>& x);

double dot(const double* x, const double* y, std::size_t n);
double frobenius_sq(const DenseMatrix& a);
double norm2(const std::vector<double>& x);
double norm2_sq(const std::vector<double>& x);

/// a + c*I (a square).
DenseMatrix add_scaled_identity(const DenseMatrix& a, double c);
/// ca*a + cb*b, elementwise.
DenseMatrix linear_combination(double ca, const DenseMatrix& a, double cb, const DenseMatrix& b);
DenseMatrix take_cols(const DenseMatrix& a, std::size_t count);
/// Scales column j by s[j]; s.size() == a.cols().
DenseMatrix scale_cols(const DenseMatrix& a, const std::vector<double>& s);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_asymmetry(const DenseMatrix& a);

}  // namespace drls::kernels
