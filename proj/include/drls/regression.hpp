#pragma once

#include <cstdint>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/guarantees.hpp"
#include "drls/select.hpp"

namespace drls {

/// Ridge solution with the built-in regularizer λ₂ = (1/k)‖M_{tail}‖_F².
/// Coefficients are computed through the SVD: x̂ = V diag(σ/(σ²+λ₂)) Uᵀ y.
struct RidgeModel {
    DenseMatrix design;
    std::size_t k = 0;
    double lambda2 = 0.0;
    std::vector<double> coefficients;
};

RidgeModel ridge_fit(const DenseMatrix& design, const std::vector<double>& y, std::size_t k);
std::vector<double> predict(const RidgeModel& model);

enum class RiskMethod { ClosedForm, MonteCarlo };

/// Expected mean squared error against the noiseless response, split into
/// squared bias and variance. Noise convention throughout: the observation is
/// y = y* + sigma_sq·ξ with ξ standard normal, so the per-coordinate noise
/// variance is sigma_sq².
struct RiskReport {
    double bias_sq = 0.0;
    double variance = 0.0;
    double risk = 0.0;
    RiskMethod method = RiskMethod::ClosedForm;
    std::size_t trials = 0;
    double std_error = 0.0;
};

RiskReport risk_closed_form(const DenseMatrix& a, const std::vector<double>& x_star,
                            double sigma_sq, std::size_t k);

/// Same decomposition for an arbitrary noiseless target (used when the design
/// is a column subset of the matrix that generated y*).
RiskReport risk_closed_form_target(const DenseMatrix& design, const std::vector<double>& y_star,
                                   double sigma_sq, std::size_t k);

RiskReport risk_monte_carlo(const DenseMatrix& a, const std::vector<double>& x_star,
                            double sigma_sq, std::size_t k, std::size_t trials,
                            std::uint64_t seed);

/// y = A·x* + sigma_sq·ξ, deterministic per seed.
std::vector<double> simulate_linear(const DenseMatrix& a, const std::vector<double>& x_star,
                                    double sigma_sq, std::uint64_t seed);

/// R(ŷ_C) ≤ (1 + βε)·R(ŷ_A) with β = risk_beta(); proven for ε < 1/(2α).
GuaranteeReport check_risk_bound(const DenseMatrix& a, const SelectionResult& sel,
                                 const std::vector<double>& x_star, double sigma_sq);

/// risk_a + λ₁²·4d‖A‖₂² / ((1/k²)‖A_{tail}‖_F⁴); the elastic-net comparison.
double elastic_net_risk_bound(const DenseMatrix& a, std::size_t k, double lambda1,
                              double risk_a);

}  // namespace drls
