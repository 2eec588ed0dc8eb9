#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls::synth {

enum class SpectrumKind { PowerLaw, Exponential, Flat };

/// Singular-value profiles: index^(-param), exp(-param*index), or all ones
/// (index is 1-based for the power law, 0-based for the exponential).
std::vector<double> make_spectrum(SpectrumKind kind, double param, std::size_t count);

/// A = U diag(sigma) Vᵀ with Haar-distributed U (n x r) and V (d x r).
DenseMatrix random_with_spectrum(std::size_t n, std::size_t d, const std::vector<double>& sigma,
                                 std::uint64_t seed);

/// d x r matrix V with orthonormal columns whose weighted squared row norms
/// match targets: Σ_l weights[l]·V(i,l)² = targets[i]. weights must be positive
/// and non-increasing, targets non-negative and non-increasing, and (weights,
/// 0, ...) must majorize targets. Built by a chain of d-1 Givens rotations,
/// each finishing one row at its exact target.
DenseMatrix orthonormal_with_row_norms(const std::vector<double>& weights,
                                       const std::vector<double>& targets);

struct PowerLawDesign {
    bool feasible = false;
    std::string reason;
    double t1 = 0.0;
    std::vector<double> targets;  // t1 * i^(-a), i = 1..d
    std::vector<double> weights;  // spectral weights, descending; self-consistent tail
};

/// Searches for spectral weights w_l = σ_l²/(σ_l²+λ₂) whose weighted row-norm
/// targets can be an exact power law t1·i^(-a). Often infeasible: the score sum
/// t1·Σ i^(-a) must reach k while every score stays at most 1, and the weights
/// beyond position k must satisfy Σ w/(1-w) = k, which forces their mass to at
/// least k/(k+1).
PowerLawDesign design_power_law_scores(std::size_t d, std::size_t k, double a);

struct PowerLawMatrix {
    DenseMatrix matrix;
    std::vector<double> targets;
    double t1 = 0.0;
};

/// Matrix whose sorted ridge leverage scores at the given k follow the exact
/// power law found by design_power_law_scores; empty when no such matrix
/// exists. Column i carries the i-th largest score. rows = 0 picks a default.
std::optional<PowerLawMatrix> power_law_ridge_matrix(std::size_t d, std::size_t k, double a,
                                                     std::uint64_t seed, std::size_t rows = 0);

}  // namespace drls::synth
