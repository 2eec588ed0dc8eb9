#include "drls/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drls/eigen_sym.hpp"
#include "drls/errors.hpp"
#include "drls/haar.hpp"
#include "drls/kernels.hpp"
#include "drls/leverage.hpp"
#include "drls/rng.hpp"
#include "drls/svd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drls {

namespace {

struct PsdMargin {
    double min_eig = 0.0;
    double normalized = 0.0;  // min_eig / scale
    bool holds = false;
};

// diff must be (numerically) symmetric; scale is the problem's spectral scale.
PsdMargin psd_margin(const DenseMatrix& diff, double scale) {
    const auto evals = symmetric_eigenvalues(diff);
    PsdMargin m;
    m.min_eig = evals.empty() ? 0.0 : evals.back();
    m.normalized = m.min_eig / scale;
    m.holds = m.normalized >= -kLoewnerCheckTol;
    return m;
}

void require_rows_match(const DenseMatrix& a, const DenseMatrix& c, const char* what) {
    if (a.rows() != c.rows()) throw InvalidInput(std::string(what) + ": row count mismatch");
}

// ‖M − QQᵀM‖_F² for Q with orthonormal columns, via the projector identity.
double projection_residual_sq(const DenseMatrix& q, const DenseMatrix& m, double fro_sq) {
    const DenseMatrix qm = kernels::matmul_at_b(q, m);
    return std::max(0.0, fro_sq - kernels::frobenius_sq(qm));
}

// (MMᵀ + λI)⁺ from M's SVD; n x n.
DenseMatrix kernel_matrix(const SvdFactors& f, double lambda) {
    const std::size_t n = f.u.rows();
    std::vector<double> coef(f.singular_values.size());
    if (lambda > 0.0) {
        for (std::size_t l = 0; l < coef.size(); ++l) {
            const double s2 = f.singular_values[l] * f.singular_values[l];
            coef[l] = 1.0 / (s2 + lambda) - 1.0 / lambda;
        }
        DenseMatrix k = kernels::matmul_a_bt(kernels::scale_cols(f.u, coef), f.u);
        for (std::size_t i = 0; i < n; ++i) k(i, i) += 1.0 / lambda;
        return k;
    }
    coef.assign(f.singular_values.size(), 0.0);
    for (std::size_t l = 0; l < f.numerical_rank; ++l) {
        const double s2 = f.singular_values[l] * f.singular_values[l];
        coef[l] = 1.0 / s2;
    }
    return kernels::matmul_a_bt(kernels::scale_cols(f.u, coef), f.u);
}

double kernel_spectral_norm(const SvdFactors& f, double lambda) {
    const std::size_t n = f.u.rows();
    if (lambda > 0.0) {
        double top = n > f.singular_values.size() ? 1.0 / lambda : 0.0;
        for (double s : f.singular_values) top = std::max(top, 1.0 / (s * s + lambda));
        return top;
    }
    if (f.numerical_rank == 0) return 0.0;
    const double smin = f.singular_values[f.numerical_rank - 1];
    return 1.0 / (smin * smin);
}

}  // namespace

const char* guarantee_name(Guarantee g) {
    switch (g) {
        case Guarantee::Spectral: return "spectral";
        case Guarantee::Css: return "css";
        case Guarantee::Pcp: return "pcp";
        case Guarantee::Kernel: return "kernel";
        case Guarantee::TwoSided: return "two_sided";
        case Guarantee::Risk: return "risk";
        case Guarantee::ColumnCount: return "column_count";
    }
    return "unknown";
}

double GuaranteeReport::detail(const std::string& key) const {
    for (const auto& [k, v] : details) {
        if (k == key) return v;
    }
    throw InvalidInput("GuaranteeReport: no detail named " + key);
}

bool GuaranteeReport::has_detail(const std::string& key) const {
    for (const auto& [k, v] : details) {
        if (k == key) return true;
    }
    return false;
}

GuaranteeReport check_spectral(const DenseMatrix& a, const SelectionResult& sel) {
    require_rows_match(a, sel.c, "check_spectral");
    const double eps = sel.epsilon;
    const std::size_t k = sel.k;
    const SvdFactors f = svd(a);
    const double tail = static_cast<double>(k) * ridge_lambda2(f, k);
    const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
    const double scale = std::max(smax * smax, 1.0);

    const DenseMatrix ga = kernels::gram_aat(a);
    const DenseMatrix gc = kernels::gram_aat(sel.c);

    DenseMatrix lower_diff = kernels::linear_combination(1.0, gc, -(1.0 - eps), ga);
    lower_diff = kernels::add_scaled_identity(lower_diff, eps / static_cast<double>(k) * tail);
    const PsdMargin lower = psd_margin(lower_diff, scale);
    const PsdMargin upper = psd_margin(kernels::linear_combination(1.0, ga, -1.0, gc), scale);

    GuaranteeReport r;
    r.guarantee = Guarantee::Spectral;
    r.lhs_value = std::min(lower.min_eig, upper.min_eig);
    r.bound_value = 0.0;
    r.margin = std::min(lower.normalized, upper.normalized);
    r.tolerance = kLoewnerCheckTol;
    r.passed = lower.holds && upper.holds;
    r.details = {{"lower_min_eig", lower.min_eig}, {"upper_min_eig", upper.min_eig},
                 {"scale", scale},                 {"epsilon", eps},
                 {"k", static_cast<double>(k)},    {"tail_fro_sq", tail},
                 {"lambda2", tail / static_cast<double>(k)}};
    return r;
}

GuaranteeReport check_css(const DenseMatrix& a, const SelectionResult& sel) {
    require_rows_match(a, sel.c, "check_css");
    const double eps = sel.epsilon;
    const std::size_t k = sel.k;
    const SvdFactors f = svd(a);
    const double tail = static_cast<double>(k) * ridge_lambda2(f, k);
    const double bound = (1.0 + 4.0 * eps) * tail;
    const double scale = std::max(1.0, kernels::frobenius_sq(a));

    // CC⁺ is the orthogonal projector onto range(C): use C's left basis.
    const SvdFactors fc = svd(sel.c);
    const DenseMatrix uc = kernels::take_cols(fc.u, std::max<std::size_t>(fc.numerical_rank, 1));
    const double fro_a = kernels::frobenius_sq(a);
    const double resid_projection =
        fc.numerical_rank == 0 ? fro_a : projection_residual_sq(uc, a, fro_a);

    const DenseMatrix proj_a =
        fc.numerical_rank == 0
            ? DenseMatrix(a.rows(), a.cols(), 0.0)
            : kernels::matmul(uc, kernels::matmul_at_b(uc, a));
    const SvdFactors fpa = svd(proj_a);
    const std::size_t kk = std::min<std::size_t>(k, fpa.numerical_rank);
    DenseMatrix pak = kk == 0 ? DenseMatrix(a.rows(), a.cols(), 0.0) : rank_k_truncation(fpa, kk);
    const double resid_rank_k = kernels::frobenius_sq(kernels::linear_combination(1.0, a, -1.0, pak));

    GuaranteeReport r;
    r.guarantee = Guarantee::Css;
    r.in_theorem_range = eps < 0.25;
    r.lhs_value = resid_rank_k;
    r.bound_value = bound;
    r.margin = std::min(bound - resid_rank_k, resid_rank_k - resid_projection) / scale;
    r.tolerance = kLoewnerCheckTol;
    r.passed = r.margin >= -r.tolerance;
    r.details = {{"resid_projection", resid_projection},
                 {"resid_rank_k", resid_rank_k},
                 {"bound", bound},
                 {"tail_fro_sq", tail},
                 {"epsilon", eps},
                 {"k", static_cast<double>(k)}};
    return r;
}

GuaranteeReport check_pcp(const DenseMatrix& a, const SelectionResult& sel,
                          std::size_t num_projections, std::uint64_t seed,
                          std::vector<double>* ratios_out) {
    require_rows_match(a, sel.c, "check_pcp");
    if (num_projections == 0) throw InvalidInput("check_pcp: need at least one projection");
    const double eps = sel.epsilon;
    const std::size_t k = sel.k;
    const std::size_t n = a.rows();
    const double bound_low = 1.0 - kPcpAlpha * eps;

    const SvdFactors fa = svd(a);
    const SvdFactors fc = svd(sel.c);
    if (fa.numerical_rank < k) throw RankError("check_pcp: rank of A below k");
    const double fro_a = kernels::frobenius_sq(a);
    const double fro_c = kernels::frobenius_sq(sel.c);
    const double floor = 1e-13 * std::max(fro_a, 1.0);

    auto ratio_for = [&](const DenseMatrix& q) {
        const double den = projection_residual_sq(q, a, fro_a);
        const double num = projection_residual_sq(q, sel.c, fro_c);
        if (den <= floor) return 1.0;  // both costs vanish together
        return num / den;
    };

    std::vector<double> ratios(num_projections + 2, 0.0);
    ratios[0] = ratio_for(kernels::take_cols(fa.u, k));
    ratios[1] = ratio_for(kernels::take_cols(fc.u, std::min<std::size_t>(k, fc.u.cols())));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t j = 0; j < num_projections; ++j) {
        auto eng = rng::substream(seed, j);
        ratios[j + 2] = ratio_for(haar_orthonormal(n, k, eng));
    }

    double min_ratio = ratios[0], max_ratio = ratios[0], mean = 0.0;
    for (double x : ratios) {
        min_ratio = std::min(min_ratio, x);
        max_ratio = std::max(max_ratio, x);
        mean += x;
    }
    mean /= static_cast<double>(ratios.size());
    if (ratios_out != nullptr) *ratios_out = ratios;

    GuaranteeReport r;
    r.guarantee = Guarantee::Pcp;
    r.in_theorem_range = eps < 0.5;
    r.lhs_value = min_ratio;
    r.bound_value = bound_low;
    r.margin = std::min(min_ratio - bound_low, 1.0 - max_ratio);
    r.tolerance = kLoewnerCheckTol;
    r.passed = r.margin >= -r.tolerance;
    r.details = {{"min_ratio", min_ratio},
                 {"max_ratio", max_ratio},
                 {"mean_ratio", mean},
                 {"ratio_top_k_of_a", ratios[0]},
                 {"ratio_top_k_of_c", ratios[1]},
                 {"num_projections", static_cast<double>(num_projections)},
                 {"alpha", kPcpAlpha},
                 {"bound_low", bound_low},
                 {"epsilon", eps},
                 {"k", static_cast<double>(k)}};
    return r;
}

GuaranteeReport check_kernel(const DenseMatrix& a, const SelectionResult& sel) {
    require_rows_match(a, sel.c, "check_kernel");
    const double eps = sel.epsilon;
    const std::size_t k = sel.k;
    const double alpha = kPcpAlpha;
    const bool factor_ok = (alpha + 1.0) * eps < 1.0;

    const SvdFactors fa = svd(a);
    const SvdFactors fc = svd(sel.c);
    const double lambda_a = ridge_lambda2(fa, k);
    const double lambda_c = ridge_lambda2(fc, std::min<std::size_t>(k, fc.singular_values.size()));
    const double tail_a = static_cast<double>(k) * lambda_a;
    const double tail_c = static_cast<double>(k) * lambda_c;

    const DenseMatrix ka = kernel_matrix(fa, lambda_a);
    const DenseMatrix kc = kernel_matrix(fc, lambda_c);
    const double scale = std::max(
        {kernel_spectral_norm(fa, lambda_a), kernel_spectral_norm(fc, lambda_c), 1.0});

    const PsdMargin lower = psd_margin(kernels::linear_combination(1.0, kc, -1.0, ka), scale);
    PsdMargin upper;
    double factor = 0.0;
    if (factor_ok) {
        factor = 1.0 / (1.0 - (alpha + 1.0) * eps);
        upper = psd_margin(kernels::linear_combination(factor, ka, -1.0, kc), scale);
    }

    const double tail_ratio = tail_a > 0.0 ? tail_c / tail_a : (tail_c > 0.0 ? -1.0 : 1.0);

    GuaranteeReport r;
    r.guarantee = Guarantee::Kernel;
    r.in_theorem_range = eps < 0.5 && factor_ok;
    r.lhs_value = std::min(lower.min_eig, factor_ok ? upper.min_eig : lower.min_eig);
    r.bound_value = 0.0;
    // With (alpha+1)*eps >= 1 the upper factor is undefined, so the ordering
    // cannot hold at any margin.
    r.margin = factor_ok ? std::min(lower.normalized, upper.normalized)
                         : -std::numeric_limits<double>::infinity();
    r.tolerance = kLoewnerCheckTol;
    r.passed = factor_ok && lower.holds && upper.holds;
    r.details = {{"lower_min_eig", lower.min_eig},
                 {"upper_min_eig", factor_ok ? upper.min_eig : 0.0},
                 {"factor", factor},
                 {"tail_ratio", tail_ratio},
                 {"lambda2_a", lambda_a},
                 {"lambda2_c", lambda_c},
                 {"scale", scale},
                 {"alpha", alpha},
                 {"epsilon", eps},
                 {"k", static_cast<double>(k)}};
    return r;
}

WeightedSelection randomized_rls_sample(const DenseMatrix& a, std::size_t k, double epsilon,
                                        double oversample, std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw InvalidInput("randomized_rls_sample: epsilon must be positive");
    if (!(oversample > 0.0)) throw InvalidInput("randomized_rls_sample: oversample must be positive");
    const SvdFactors f = svd(a);
    if (f.numerical_rank < k) throw RankError("randomized_rls_sample: rank below k");
    const LeverageScores scores = ridge_leverage_scores(f, k);

    const double lnk = std::log(static_cast<double>(k));
    auto eng = rng::engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    WeightedSelection out;
    for (std::size_t i = 0; i < scores.scores.size(); ++i) {
        const double p = std::min(1.0, oversample * scores.scores[i] * lnk / (epsilon * epsilon));
        const double draw = unif(eng);
        if (p > 0.0 && draw < p) {
            out.indices.push_back(i);
            out.weights.push_back(1.0 / std::sqrt(p));
        }
    }
    out.c_weighted = DenseMatrix(a.rows(), out.indices.size(), 0.0);
    for (std::size_t j = 0; j < out.indices.size(); ++j) {
        const std::size_t src = out.indices[j];
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out.c_weighted(i, j) = a(i, src) * out.weights[j];
        }
    }
    return out;
}

GuaranteeReport check_two_sided(const DenseMatrix& a, const DenseMatrix& c_any, std::size_t k,
                                double epsilon) {
    require_rows_match(a, c_any, "check_two_sided");
    if (k == 0) throw InvalidInput("check_two_sided: k must be positive");
    if (!(epsilon > 0.0)) throw InvalidInput("check_two_sided: epsilon must be positive");

    const SvdFactors f = svd(a);
    const double tail = static_cast<double>(k) * ridge_lambda2(f, k);
    const double shift = epsilon / static_cast<double>(k) * tail;
    const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
    const double scale = std::max(smax * smax, 1.0);

    const DenseMatrix ga = kernels::gram_aat(a);
    const DenseMatrix gc = kernels::gram_aat(c_any);

    DenseMatrix lower_diff = kernels::linear_combination(1.0, gc, -(1.0 - epsilon), ga);
    lower_diff = kernels::add_scaled_identity(lower_diff, shift);
    DenseMatrix upper_diff = kernels::linear_combination(1.0 + epsilon, ga, -1.0, gc);
    upper_diff = kernels::add_scaled_identity(upper_diff, shift);

    const PsdMargin lower = psd_margin(lower_diff, scale);
    const PsdMargin upper = psd_margin(upper_diff, scale);

    GuaranteeReport r;
    r.guarantee = Guarantee::TwoSided;
    r.lhs_value = std::min(lower.min_eig, upper.min_eig);
    r.bound_value = 0.0;
    r.margin = std::min(lower.normalized, upper.normalized);
    r.tolerance = kLoewnerCheckTol;
    r.passed = lower.holds && upper.holds;
    r.details = {{"lower_min_eig", lower.min_eig}, {"upper_min_eig", upper.min_eig},
                 {"scale", scale},                 {"epsilon", epsilon},
                 {"k", static_cast<double>(k)},    {"tail_fro_sq", tail}};
    return r;
}

}  // namespace drls
