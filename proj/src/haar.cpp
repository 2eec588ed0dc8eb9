#include "drls/haar.hpp"

#include <cmath>
#include <vector>

#include "drls/errors.hpp"
#include "drls/kernels.hpp"
#include "drls/rng.hpp"

namespace drls {

namespace {

// Householder QR of a (n x k, n >= k). Returns thin Q with column j scaled by
// the sign of R(j, j).
DenseMatrix qr_q_sign_fixed(DenseMatrix a) {
    const std::size_t n = a.rows();
    const std::size_t k = a.cols();
    std::vector<std::vector<double>> reflectors(k);
    std::vector<double> rdiag(k, 0.0);

    for (std::size_t j = 0; j < k; ++j) {
        double norm_sq = 0.0;
        for (std::size_t i = j; i < n; ++i) norm_sq += a(i, j) * a(i, j);
        const double norm = std::sqrt(norm_sq);
        if (norm == 0.0) {
            rdiag[j] = 0.0;
            continue;
        }
        const double alpha = a(j, j) >= 0.0 ? -norm : norm;
        std::vector<double> v(n - j, 0.0);
        v[0] = a(j, j) - alpha;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a(i, j);
        double v_sq = 0.0;
        for (double x : v) v_sq += x * x;
        rdiag[j] = alpha;
        if (v_sq == 0.0) continue;
        const double beta = 2.0 / v_sq;
        for (std::size_t c = j; c < k; ++c) {
            double w = 0.0;
            for (std::size_t i = j; i < n; ++i) w += v[i - j] * a(i, c);
            w *= beta;
            for (std::size_t i = j; i < n; ++i) a(i, c) -= w * v[i - j];
        }
        reflectors[j] = std::move(v);
    }

    DenseMatrix q(n, k, 0.0);
    for (std::size_t j = 0; j < k; ++j) q(j, j) = 1.0;
    for (std::size_t j = k; j-- > 0;) {
        const auto& v = reflectors[j];
        if (v.empty()) continue;
        double v_sq = 0.0;
        for (double x : v) v_sq += x * x;
        const double beta = 2.0 / v_sq;
        for (std::size_t c = 0; c < k; ++c) {
            double w = 0.0;
            for (std::size_t i = j; i < n; ++i) w += v[i - j] * q(i, c);
            w *= beta;
            for (std::size_t i = j; i < n; ++i) q(i, c) -= w * v[i - j];
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (rdiag[j] < 0.0) {
            for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
        } else if (rdiag[j] == 0.0) {
            // Degenerate input column; keep the unit column produced above.
        }
    }
    return q;
}

}  // namespace

DenseMatrix haar_orthonormal(std::size_t n, std::size_t k, std::mt19937_64& eng) {
    if (n == 0 || k == 0) throw InvalidInput("haar_orthonormal: zero dimension");
    if (k > n) throw RankError("haar_orthonormal: k exceeds n");
    return qr_q_sign_fixed(rng::gaussian_matrix(n, k, eng));
}

DenseMatrix haar_projection(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n == 0 || k == 0) throw InvalidInput("haar_projection: zero dimension");
    if (k > n) throw RankError("haar_projection: k exceeds n");
    auto eng = rng::engine(seed);
    const DenseMatrix q = haar_orthonormal(n, k, eng);
    return kernels::gram_aat(q);
}

}  // namespace drls
