#pragma once

// Shared helpers and independent oracles for the test suites. Oracles here
// deliberately avoid the library's primary computation paths: ridge scores go
// through an explicit pseudoinverse of the regularized Gram matrix, and ridge
// fits are re-solved from the normal equations by Cholesky.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/errors.hpp"
#include "drls/kernels.hpp"
#include "drls/leverage.hpp"
#include "drls/rng.hpp"
#include "drls/select.hpp"
#include "drls/svd.hpp"
#include "drls/synth.hpp"

namespace testutil {

using drls::DenseMatrix;

inline double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

/// Ridge scores by the direct route: a_iᵀ (AAᵀ + λ₂I)⁺ a_i.
inline std::vector<double> direct_ridge_scores(const DenseMatrix& a, std::size_t k) {
    const auto f = drls::svd(a);
    const double lambda2 = drls::ridge_lambda2(f, k);
    const DenseMatrix g = drls::kernels::add_scaled_identity(drls::kernels::gram_aat(a), lambda2);
    const DenseMatrix p = drls::pseudoinverse(g);
    std::vector<double> out(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        const auto col = a.column(i);
        const auto pc = drls::kernels::matvec(p, col);
        out[i] = drls::kernels::dot(col.data(), pc.data(), col.size());
    }
    return out;
}

/// Solves (MᵀM + λI)x = Mᵀy by Cholesky; the normal-equation oracle.
inline std::vector<double> cholesky_ridge_solve(const DenseMatrix& m, const std::vector<double>& y,
                                                double lambda) {
    const std::size_t d = m.cols();
    DenseMatrix g = drls::kernels::add_scaled_identity(drls::kernels::gram_ata(m), lambda);
    std::vector<double> rhs = drls::kernels::matvec_t(m, y);

    DenseMatrix l(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            if (i == j) {
                if (s <= 0.0) throw drls::Error("cholesky oracle: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) {
        double s = rhs[i];
        for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * z[p];
        z[i] = s / l(i, i);
    }
    std::vector<double> x(d);
    for (std::size_t i = d; i-- > 0;) {
        double s = z[i];
        for (std::size_t p = i + 1; p < d; ++p) s -= l(p, i) * x[p];
        x[i] = s / l(i, i);
    }
    return x;
}

/// Random matrix with a known spectrum family, as used across the sweeps.
struct SweepInstance {
    DenseMatrix a;
    std::size_t k = 1;
    std::uint64_t seed = 0;
};

inline SweepInstance sweep_instance(std::uint64_t seed) {
    auto eng = drls::rng::engine(seed);
    std::uniform_int_distribution<std::size_t> nd(5, 40), dd(8, 150), kind(0, 4), kpick(0, 3);
    const std::size_t n = nd(eng);
    const std::size_t d = dd(eng);
    const std::size_t r = std::min(n, d);
    std::vector<double> sigma;
    switch (kind(eng)) {
        case 0: sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::PowerLaw, 1.5, r); break;
        case 1: sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::PowerLaw, 2.0, r); break;
        case 2: sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::PowerLaw, 3.0, r); break;
        case 3:
            sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::Exponential, 0.3, r);
            break;
        default: sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::Flat, 0.0, r); break;
    }
    static const std::size_t kchoices[4] = {1, 2, 5, 8};
    std::size_t k = kchoices[kpick(eng)];
    while (k > r) k = kchoices[kpick(eng)];
    SweepInstance inst;
    inst.a = drls::synth::random_with_spectrum(n, d, sigma, drls::rng::splitmix64(seed ^ 0xF00D));
    inst.k = k;
    inst.seed = seed;
    return inst;
}

/// Rebuilds a SelectionResult for an arbitrary index set (forged selections
/// for adversarial checks).
inline drls::SelectionResult forge_selection(const DenseMatrix& a,
                                             const std::vector<std::size_t>& theta, std::size_t k,
                                             double epsilon) {
    drls::SelectionResult sel;
    sel.theta = theta;
    sel.k = k;
    sel.epsilon = epsilon;
    sel.selection = DenseMatrix(a.cols(), theta.size(), 0.0);
    sel.c = DenseMatrix(a.rows(), theta.size(), 0.0);
    for (std::size_t j = 0; j < theta.size(); ++j) {
        sel.selection(theta[j], j) = 1.0;
        for (std::size_t i = 0; i < a.rows(); ++i) sel.c(i, j) = a(i, theta[j]);
    }
    return sel;
}

}  // namespace testutil
