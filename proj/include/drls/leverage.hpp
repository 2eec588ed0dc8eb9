#pragma once

#include <cstddef>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/svd.hpp"

namespace drls {

enum class ScoreKind { Ridge, Subspace, Classical };

/// Per-column leverage scores. total is the exact sum of scores; for ridge
/// scores it never exceeds 2k. k is 0 for the classical kind.
struct LeverageScores {
    ScoreKind kind = ScoreKind::Classical;
    std::size_t k = 0;
    double lambda2 = 0.0;
    std::vector<double> scores;
    double total = 0.0;
};

/// Regularizer (1/k)·‖A − A_k‖_F² used throughout.
double ridge_lambda2(const SvdFactors& f, std::size_t k);

/// Ridge scores a_iᵀ (AAᵀ + λ₂I)⁺ a_i computed through the SVD as
/// Σ_l (σ_l²/(σ_l²+λ₂))·V(i,l)². Requires rank(A) >= k.
LeverageScores ridge_leverage_scores(const SvdFactors& f, std::size_t k);
LeverageScores ridge_leverage_scores(const DenseMatrix& a, std::size_t k);

/// Rank-k subspace scores a_iᵀ (A_k A_kᵀ)⁺ a_i = Σ_{l<k} V(i,l)².
LeverageScores subspace_leverage_scores(const SvdFactors& f, std::size_t k);
LeverageScores subspace_leverage_scores(const DenseMatrix& a, std::size_t k);

/// Ridge scores in the k = rank limit: squared row norms of V_r.
LeverageScores classical_leverage_scores(const SvdFactors& f);
LeverageScores classical_leverage_scores(const DenseMatrix& a);

/// The spectral-weight split behind the score sum: head = Σ_{l<=k} w_l,
/// tail = Σ_{l>k} w_l with w_l = σ_l²/(σ_l²+λ₂); each part is at most k.
struct ScoreSumSplit {
    double head = 0.0;
    double tail = 0.0;
};
ScoreSumSplit ridge_score_sum_split(const SvdFactors& f, std::size_t k);

}  // namespace drls
