#include "drls/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "drls/errors.hpp"
#include "drls/kernels.hpp"

namespace drls {

namespace {

// One-sided Jacobi on the rows of bt (the columns of the tall factor B, stored
// transposed so each column is contiguous). Right rotations accumulate into jt,
// which holds Jᵀ where B·J has orthogonal columns.
void jacobi_rows(DenseMatrix& bt, DenseMatrix& jt) {
    const std::size_t q = bt.rows();
    const std::size_t m = bt.cols();
    constexpr double tol = 1e-15;
    constexpr int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        std::size_t rotations = 0;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            for (std::size_t j = i + 1; j < q; ++j) {
                double* bi = bt.row(i);
                double* bj = bt.row(j);
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    alpha += bi[r] * bi[r];
                    beta += bj[r] * bj[r];
                    gamma += bi[r] * bj[r];
                }
                const double denom = std::sqrt(alpha) * std::sqrt(beta);
                if (denom == 0.0 || std::fabs(gamma) <= tol * denom) continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < m; ++r) {
                    const double x = bi[r], y = bj[r];
                    bi[r] = c * x - s * y;
                    bj[r] = s * x + c * y;
                }
                double* ji = jt.row(i);
                double* jj = jt.row(j);
                for (std::size_t r = 0; r < q; ++r) {
                    const double x = ji[r], y = jj[r];
                    ji[r] = c * x - s * y;
                    jj[r] = s * x + c * y;
                }
                ++rotations;
            }
        }
        if (rotations == 0) break;
    }
}

// Fills any zero rows of ut with unit vectors orthogonal to the other rows, so
// the returned left factor keeps orthonormal columns for rank-deficient input.
void complete_orthonormal_rows(DenseMatrix& ut, const std::vector<bool>& good) {
    const std::size_t q = ut.rows();
    const std::size_t m = ut.cols();
    std::vector<bool> filled = good;
    for (std::size_t i = 0; i < q; ++i) {
        if (filled[i]) continue;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<double> v(m, 0.0);
            v[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t r = 0; r < q; ++r) {
                    if (!filled[r]) continue;
                    const double proj = kernels::dot(v.data(), ut.row(r), m);
                    for (std::size_t cidx = 0; cidx < m; ++cidx) v[cidx] -= proj * ut(r, cidx);
                }
            }
            const double nrm = std::sqrt(kernels::dot(v.data(), v.data(), m));
            if (nrm > 0.5) {
                for (std::size_t cidx = 0; cidx < m; ++cidx) ut(i, cidx) = v[cidx] / nrm;
                filled[i] = true;
                break;
            }
        }
        if (!filled[i]) throw Error("svd: failed to complete orthonormal basis");
    }
}

}  // namespace

SvdFactors svd(const DenseMatrix& a) {
    a.require_finite("svd");
    if (a.rows() == 0 || a.cols() == 0) throw InvalidInput("svd: empty matrix");

    const bool tall = a.rows() >= a.cols();
    const std::size_t m = std::max(a.rows(), a.cols());
    const std::size_t q = std::min(a.rows(), a.cols());

    // bt holds the columns of the tall factor as contiguous rows.
    DenseMatrix bt = tall ? kernels::transpose(a) : a;
    DenseMatrix jt = DenseMatrix::identity(q);
    jacobi_rows(bt, jt);

    std::vector<double> sv(q);
    for (std::size_t i = 0; i < q; ++i) {
        sv[i] = std::sqrt(kernels::dot(bt.row(i), bt.row(i), m));
    }
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

    DenseMatrix ut(q, m);  // rows become the columns of the tall factor's U
    DenseMatrix jt_sorted(q, q);
    std::vector<double> s_sorted(q);
    std::vector<bool> good(q, false);
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t src = order[i];
        s_sorted[i] = sv[src];
        for (std::size_t r = 0; r < q; ++r) jt_sorted(i, r) = jt(src, r);
        if (sv[src] > 0.0) {
            good[i] = true;
            const double inv = 1.0 / sv[src];
            for (std::size_t cidx = 0; cidx < m; ++cidx) ut(i, cidx) = bt(src, cidx) * inv;
        } else {
            for (std::size_t cidx = 0; cidx < m; ++cidx) ut(i, cidx) = 0.0;
        }
    }
    complete_orthonormal_rows(ut, good);

    DenseMatrix u_tall = kernels::transpose(ut);        // m x q
    DenseMatrix v_tall = kernels::transpose(jt_sorted);  // q x q

    SvdFactors f;
    f.singular_values = std::move(s_sorted);
    if (tall) {
        f.u = std::move(u_tall);
        f.v = std::move(v_tall);
    } else {
        f.u = std::move(v_tall);
        f.v = std::move(u_tall);
    }
    const double cutoff = static_cast<double>(m) * std::numeric_limits<double>::epsilon() *
                          (f.singular_values.empty() ? 0.0 : f.singular_values.front());
    f.numerical_rank = 0;
    for (double s : f.singular_values) {
        if (s > cutoff) ++f.numerical_rank;
    }
    return f;
}

double rank_cutoff(const SvdFactors& f) {
    const std::size_t m = std::max(f.u.rows(), f.v.rows());
    const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
    return static_cast<double>(m) * std::numeric_limits<double>::epsilon() * smax;
}

DenseMatrix rank_k_truncation(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("rank_k_truncation: k must be positive");
    if (k > f.numerical_rank) throw RankError("rank_k_truncation: k exceeds numerical rank");
    DenseMatrix uk = kernels::take_cols(f.u, k);
    std::vector<double> sk(f.singular_values.begin(), f.singular_values.begin() + k);
    DenseMatrix vk = kernels::take_cols(f.v, k);
    return kernels::matmul_a_bt(kernels::scale_cols(uk, sk), vk);
}

double tail_frobenius_sq(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("tail_frobenius_sq: k must be positive");
    if (k > f.singular_values.size()) throw RankError("tail_frobenius_sq: k exceeds dimensions");
    double s = 0.0;
    for (std::size_t i = f.singular_values.size(); i > k; --i) {
        const double x = f.singular_values[i - 1];
        s += x * x;
    }
    return s;
}

DenseMatrix pseudoinverse(const SvdFactors& f) {
    const std::size_t r = f.numerical_rank;
    const std::size_t rows = f.u.rows();
    const std::size_t cols = f.v.rows();
    if (r == 0) return DenseMatrix(cols, rows, 0.0);
    DenseMatrix vr = kernels::take_cols(f.v, r);
    DenseMatrix ur = kernels::take_cols(f.u, r);
    std::vector<double> inv(r);
    for (std::size_t i = 0; i < r; ++i) inv[i] = 1.0 / f.singular_values[i];
    return kernels::matmul_a_bt(kernels::scale_cols(vr, inv), ur);
}

DenseMatrix pseudoinverse(const DenseMatrix& a) { return pseudoinverse(svd(a)); }

DenseMatrix svd_reconstruct(const SvdFactors& f) {
    return kernels::matmul_a_bt(kernels::scale_cols(f.u, f.singular_values), f.v);
}

}  // namespace drls
