#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/select.hpp"

namespace drls {

/// Lower-bound coefficient of the projection-cost guarantee: 2(2 + √2).
inline const double kPcpAlpha = 2.0 * (2.0 + std::sqrt(2.0));

/// Risk-ratio coefficient 2α(−1 + 2α + 3α²)/(1 − α)² with α = kPcpAlpha.
inline double risk_beta() {
    const double a = kPcpAlpha;
    return 2.0 * a * (-1.0 + 2.0 * a + 3.0 * a * a) / ((1.0 - a) * (1.0 - a));
}

/// Shared slack for all ordering checks, relative to the spectral scale.
inline constexpr double kLoewnerCheckTol = 1e-8;

enum class Guarantee { Spectral, Css, Pcp, Kernel, TwoSided, Risk, ColumnCount };

const char* guarantee_name(Guarantee g);

/// One verified inequality. margin is normalized so that passed holds exactly
/// when margin >= -tolerance. in_theorem_range is false when the requested
/// epsilon falls outside the proven range; the check still runs.
struct GuaranteeReport {
    Guarantee guarantee = Guarantee::Spectral;
    double lhs_value = 0.0;
    double bound_value = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool in_theorem_range = true;
    std::vector<std::pair<std::string, double>> details;

    double detail(const std::string& key) const;
    bool has_detail(const std::string& key) const;
};

/// (1-ε)AAᵀ − (ε/k)‖A_{tail}‖_F² I ⪯ CCᵀ and CCᵀ ⪯ AAᵀ.
GuaranteeReport check_spectral(const DenseMatrix& a, const SelectionResult& sel);

/// ‖A − CC⁺A‖_F² ≤ ‖A − (CC⁺A)_k‖_F² ≤ (1+4ε)‖A_{tail}‖_F², proven for ε < 1/4.
GuaranteeReport check_css(const DenseMatrix& a, const SelectionResult& sel);

/// For rank-k projections X (Haar draws plus the top-k projectors of A and C):
/// (1-αε)‖A−XA‖_F² ≤ ‖C−XC‖_F² ≤ ‖A−XA‖_F². ratios_out, when given, receives
/// every ratio in a fixed order.
GuaranteeReport check_pcp(const DenseMatrix& a, const SelectionResult& sel,
                          std::size_t num_projections, std::uint64_t seed,
                          std::vector<double>* ratios_out = nullptr);

/// K(A) ⪯ K(C) ⪯ K(A)/(1−(α+1)ε) with K(M) = (MMᵀ + (1/k)‖M_{tail}‖_F² I)⁺.
GuaranteeReport check_kernel(const DenseMatrix& a, const SelectionResult& sel);

/// Columns drawn independently with probability min(1, oversample·τ̄_i·ln(k)/ε²)
/// and scaled by 1/√p, making CCᵀ unbiased for AAᵀ.
struct WeightedSelection {
    std::vector<std::size_t> indices;
    std::vector<double> weights;
    DenseMatrix c_weighted;  // n x |indices|
};
WeightedSelection randomized_rls_sample(const DenseMatrix& a, std::size_t k, double epsilon,
                                        double oversample, std::uint64_t seed);

/// (1-ε)AAᵀ − (ε/k)τI ⪯ CCᵀ ⪯ (1+ε)AAᵀ + (ε/k)τI for any column matrix C
/// (deterministic or weighted-random), τ = ‖A_{tail}‖_F².
GuaranteeReport check_two_sided(const DenseMatrix& a, const DenseMatrix& c_any, std::size_t k,
                                double epsilon);

}  // namespace drls
