#pragma once

#include <cstddef>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/leverage.hpp"

namespace drls {

/// Output of deterministic ridge leverage column selection.
struct SelectionResult {
    std::vector<std::size_t> theta;  // selected column indices in selection order
    DenseMatrix selection;           // d x |theta| 0/1 matrix S
    DenseMatrix c;                   // n x |theta| submatrix A·S
    double threshold = 0.0;          // score of the last column taken
    double residual = 0.0;           // leverage mass of the discarded columns
    double epsilon = 0.0;
    std::size_t k = 0;
    bool tie_at_threshold = false;
};

/// Pure selection logic on a raw score vector: sort descending (ties broken by
/// ascending index), take columns until the kept mass strictly exceeds
/// total - epsilon, then extend to at least k columns.
struct SelectionPlan {
    std::vector<std::size_t> order;  // all columns, score-descending
    std::size_t take = 0;            // |theta|
    double threshold = 0.0;
    double residual = 0.0;
    double total = 0.0;
    bool tie_at_threshold = false;
};
SelectionPlan select_from_scores(const std::vector<double>& scores, std::size_t k, double epsilon);

SelectionResult drls_select(const DenseMatrix& a, std::size_t k, double epsilon);
/// Variant reusing precomputed ridge scores (must match a and k).
SelectionResult drls_select(const DenseMatrix& a, const LeverageScores& ridge, std::size_t k,
                            double epsilon);

/// Worst-case selected-column count under score decay index^(-a), a > 1:
/// ceil(max((4k/eps)^(1/a) - 1, (4k/((a-1)eps))^(1/(a-1)) - 1, k)).
std::size_t power_law_column_bound(std::size_t k, double epsilon, double decay_power);

/// 1-based inclusive positions into a score-descending ordering.
struct IndexRange {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

/// Least-squares fit of log(score) against log(index): score ≈ b · index^(-a).
struct PowerLawFit {
    double decay_power = 0.0;  // a
    double scale = 0.0;        // b
    IndexRange fit_range;
    double residual_norm = 0.0;  // l2 norm of log-space residuals
};

/// Fits over sorted_scores[lo-1 .. hi-1]; scores must be positive and
/// non-increasing over the range, and the range must hold at least 2 entries.
PowerLawFit fit_power_law_sorted(const std::vector<double>& sorted_scores, IndexRange range);
PowerLawFit fit_power_law(const LeverageScores& scores, IndexRange range);

}  // namespace drls
