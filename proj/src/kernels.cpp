#include "drls/kernels.hpp"

#include <cmath>
#include <cstdint>

#include "drls/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drls::kernels {

namespace {

// Work estimate below which threading overhead dominates.
constexpr std::size_t kParallelCutoff = 1 << 15;

void require_mul(std::size_t inner_a, std::size_t inner_b, const char* what) {
    if (inner_a != inner_b) throw InvalidInput(std::string(what) + ": inner dimensions differ");
}

// Row kernels shared by the serial and parallel drivers. Each computes one full
// output row, so the result is independent of how rows are scheduled.

inline void matmul_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, std::size_t i) {
    double* crow = c.row(i);
    for (std::size_t j = 0; j < c.cols(); ++j) crow[j] = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.row(k);
        for (std::size_t j = 0; j < c.cols(); ++j) crow[j] += aik * brow[j];
    }
}

inline void matmul_at_b_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                            std::size_t i) {
    double* crow = c.row(i);
    for (std::size_t j = 0; j < c.cols(); ++j) crow[j] = 0.0;
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double aki = a(k, i);
        if (aki == 0.0) continue;
        const double* brow = b.row(k);
        for (std::size_t j = 0; j < c.cols(); ++j) crow[j] += aki * brow[j];
    }
}

inline void matmul_a_bt_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                            std::size_t i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t j = 0; j < c.cols(); ++j) crow[j] = dot(arow, b.row(j), a.cols());
}

inline void gram_aat_row(const DenseMatrix& a, DenseMatrix& g, std::size_t i) {
    const double* arow = a.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
        const double v = dot(arow, a.row(j), a.cols());
        g(i, j) = v;
        g(j, i) = v;
    }
}

inline void gram_ata_row(const DenseMatrix& a, DenseMatrix& g, std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) v += a(k, i) * a(k, j);
        g(i, j) = v;
        g(j, i) = v;
    }
}

inline void transpose_row(const DenseMatrix& a, DenseMatrix& t, std::size_t i) {
    double* trow = t.row(i);
    for (std::size_t j = 0; j < a.rows(); ++j) trow[j] = a(j, i);
}

template <typename RowFn>
void run_rows(std::size_t nrows, std::size_t work, RowFn fn) {
#ifdef _OPENMP
    if (work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < nrows; ++i) fn(i);
        return;
    }
#else
    (void)work;
#endif
    for (std::size_t i = 0; i < nrows; ++i) fn(i);
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double frobenius_sq(const DenseMatrix& a) {
    double s = 0.0;
    for (double x : a.entries()) s += x * x;
    return s;
}

double norm2_sq(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double norm2(const std::vector<double>& x) { return std::sqrt(norm2_sq(x)); }

namespace serial {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.cols(), b.rows(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, c, i);
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.rows(), b.rows(), "matmul_at_b");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) matmul_at_b_row(a, b, c, i);
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.cols(), b.cols(), "matmul_a_bt");
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_a_bt_row(a, b, c, i);
    return c;
}

DenseMatrix gram_aat(const DenseMatrix& a) {
    DenseMatrix g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) gram_aat_row(a, g, i);
    return g;
}

DenseMatrix gram_ata(const DenseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) gram_ata_row(a, g, i);
    return g;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.cols(); ++i) transpose_row(a, t, i);
    return t;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
    if (x.size() != a.cols()) throw InvalidInput("matvec: length mismatch");
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x.data(), a.cols());
    return y;
}

std::vector<double> matvec_t(const DenseMatrix& a, const std::vector<double>& x) {
    if (x.size() != a.rows()) throw InvalidInput("matvec_t: length mismatch");
    std::vector<double> y(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

}  // namespace serial

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.cols(), b.rows(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    run_rows(a.rows(), a.rows() * a.cols() * b.cols(),
             [&](std::size_t i) { matmul_row(a, b, c, i); });
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.rows(), b.rows(), "matmul_at_b");
    DenseMatrix c(a.cols(), b.cols());
    run_rows(a.cols(), a.rows() * a.cols() * b.cols(),
             [&](std::size_t i) { matmul_at_b_row(a, b, c, i); });
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    require_mul(a.cols(), b.cols(), "matmul_a_bt");
    DenseMatrix c(a.rows(), b.rows());
    run_rows(a.rows(), a.rows() * a.cols() * b.rows(),
             [&](std::size_t i) { matmul_a_bt_row(a, b, c, i); });
    return c;
}

DenseMatrix gram_aat(const DenseMatrix& a) {
    DenseMatrix g(a.rows(), a.rows());
    run_rows(a.rows(), a.rows() * a.rows() * a.cols() / 2,
             [&](std::size_t i) { gram_aat_row(a, g, i); });
    return g;
}

DenseMatrix gram_ata(const DenseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    run_rows(a.cols(), a.cols() * a.cols() * a.rows() / 2,
             [&](std::size_t i) { gram_ata_row(a, g, i); });
    return g;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    run_rows(a.cols(), a.rows() * a.cols(), [&](std::size_t i) { transpose_row(a, t, i); });
    return t;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
    if (x.size() != a.cols()) throw InvalidInput("matvec: length mismatch");
    std::vector<double> y(a.rows());
    run_rows(a.rows(), a.rows() * a.cols(),
             [&](std::size_t i) { y[i] = dot(a.row(i), x.data(), a.cols()); });
    return y;
}

std::vector<double> matvec_t(const DenseMatrix& a, const std::vector<double>& x) {
    if (x.size() != a.rows()) throw InvalidInput("matvec_t: length mismatch");
    std::vector<double> y(a.cols());
    run_rows(a.cols(), a.rows() * a.cols(), [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
        y[j] = s;
    });
    return y;
}

DenseMatrix add_scaled_identity(const DenseMatrix& a, double c) {
    if (a.rows() != a.cols()) throw InvalidInput("add_scaled_identity: matrix not square");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) += c;
    return out;
}

DenseMatrix linear_combination(double ca, const DenseMatrix& a, double cb, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("linear_combination: shape mismatch");
    }
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.entries().size(); ++i) {
        out.data()[i] = ca * a.data()[i] + cb * b.data()[i];
    }
    return out;
}

DenseMatrix take_cols(const DenseMatrix& a, std::size_t count) {
    if (count > a.cols()) throw InvalidInput("take_cols: count exceeds columns");
    DenseMatrix out(a.rows(), count);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < count; ++j) out(i, j) = a(i, j);
    }
    return out;
}

DenseMatrix scale_cols(const DenseMatrix& a, const std::vector<double>& s) {
    if (s.size() != a.cols()) throw InvalidInput("scale_cols: length mismatch");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s[j];
    }
    return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
    }
    return m;
}

double max_abs_asymmetry(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidInput("max_abs_asymmetry: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            m = std::max(m, std::fabs(a(i, j) - a(j, i)));
        }
    }
    return m;
}

}  // namespace drls::kernels
