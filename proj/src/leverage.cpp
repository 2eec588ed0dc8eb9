#include "drls/leverage.hpp"

#include <cmath>

#include "drls/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drls {

namespace {

// Spectral weights w_l. With λ₂ = 0 the formula reduces to the pseudoinverse
// cutoff: weight 1 on the numerical range, 0 beyond.
std::vector<double> ridge_weights(const SvdFactors& f, double lambda2) {
    std::vector<double> w(f.singular_values.size(), 0.0);
    if (lambda2 > 0.0) {
        for (std::size_t l = 0; l < w.size(); ++l) {
            const double s2 = f.singular_values[l] * f.singular_values[l];
            w[l] = s2 / (s2 + lambda2);
        }
    } else {
        for (std::size_t l = 0; l < f.numerical_rank; ++l) w[l] = 1.0;
    }
    return w;
}

std::vector<double> weighted_row_norms(const DenseMatrix& v, const std::vector<double>& w) {
    const std::size_t d = v.rows();
    const std::size_t r = v.cols();
    std::vector<double> scores(d, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (d * r > 4096)
#endif
    for (std::size_t i = 0; i < d; ++i) {
        const double* vrow = v.row(i);
        double s = 0.0;
        for (std::size_t l = 0; l < r; ++l) s += w[l] * vrow[l] * vrow[l];
        scores[i] = s;
    }
    return scores;
}

double sum(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

}  // namespace

double ridge_lambda2(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("ridge_lambda2: k must be positive");
    if (k > f.singular_values.size()) throw RankError("ridge_lambda2: k exceeds dimensions");
    // Singular values at numerical-noise level count as exact zeros here, so a
    // matrix of rank k gets λ₂ = 0 rather than a denormal-sized regularizer.
    const double cutoff = rank_cutoff(f);
    double tail = 0.0;
    for (std::size_t l = f.singular_values.size(); l > k; --l) {
        const double s = f.singular_values[l - 1];
        if (s > cutoff) tail += s * s;
    }
    return tail / static_cast<double>(k);
}

LeverageScores ridge_leverage_scores(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("ridge_leverage_scores: k must be positive");
    if (f.numerical_rank < k) throw RankError("ridge_leverage_scores: rank below k");
    LeverageScores out;
    out.kind = ScoreKind::Ridge;
    out.k = k;
    out.lambda2 = ridge_lambda2(f, k);
    out.scores = weighted_row_norms(f.v, ridge_weights(f, out.lambda2));
    out.total = sum(out.scores);
    return out;
}

LeverageScores ridge_leverage_scores(const DenseMatrix& a, std::size_t k) {
    return ridge_leverage_scores(svd(a), k);
}

LeverageScores subspace_leverage_scores(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("subspace_leverage_scores: k must be positive");
    if (f.numerical_rank < k) throw RankError("subspace_leverage_scores: rank below k");
    std::vector<double> w(f.singular_values.size(), 0.0);
    for (std::size_t l = 0; l < k; ++l) w[l] = 1.0;
    LeverageScores out;
    out.kind = ScoreKind::Subspace;
    out.k = k;
    out.scores = weighted_row_norms(f.v, w);
    out.total = sum(out.scores);
    return out;
}

LeverageScores subspace_leverage_scores(const DenseMatrix& a, std::size_t k) {
    return subspace_leverage_scores(svd(a), k);
}

LeverageScores classical_leverage_scores(const SvdFactors& f) {
    if (f.numerical_rank == 0) throw RankError("classical_leverage_scores: zero matrix");
    std::vector<double> w(f.singular_values.size(), 0.0);
    for (std::size_t l = 0; l < f.numerical_rank; ++l) w[l] = 1.0;
    LeverageScores out;
    out.kind = ScoreKind::Classical;
    out.scores = weighted_row_norms(f.v, w);
    out.total = sum(out.scores);
    return out;
}

LeverageScores classical_leverage_scores(const DenseMatrix& a) {
    return classical_leverage_scores(svd(a));
}

ScoreSumSplit ridge_score_sum_split(const SvdFactors& f, std::size_t k) {
    if (k == 0) throw InvalidInput("ridge_score_sum_split: k must be positive");
    if (f.numerical_rank < k) throw RankError("ridge_score_sum_split: rank below k");
    const auto w = ridge_weights(f, ridge_lambda2(f, k));
    ScoreSumSplit split;
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (l < k) {
            split.head += w[l];
        } else {
            split.tail += w[l];
        }
    }
    return split;
}

}  // namespace drls
