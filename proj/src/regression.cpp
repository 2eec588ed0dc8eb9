#include "drls/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drls/errors.hpp"
#include "drls/kernels.hpp"
#include "drls/leverage.hpp"
#include "drls/rng.hpp"
#include "drls/svd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drls {

namespace {

// Hat matrix M(MᵀM + λI)⁻¹Mᵀ = U diag(σ²/(σ²+λ)) Uᵀ; for λ = 0 the
// pseudoinverse limit, the projector onto the numerical range.
DenseMatrix hat_matrix(const SvdFactors& f, double lambda) {
    std::vector<double> coef(f.singular_values.size(), 0.0);
    if (lambda > 0.0) {
        for (std::size_t l = 0; l < coef.size(); ++l) {
            const double s2 = f.singular_values[l] * f.singular_values[l];
            coef[l] = s2 / (s2 + lambda);
        }
    } else {
        for (std::size_t l = 0; l < f.numerical_rank; ++l) coef[l] = 1.0;
    }
    return kernels::matmul_a_bt(kernels::scale_cols(f.u, coef), f.u);
}

struct BiasVarParts {
    double bias_sq = 0.0;
    double variance_unit = 0.0;  // variance per unit noise variance
};

BiasVarParts bias_variance_parts(const SvdFactors& f, double lambda,
                                 const std::vector<double>& y_star) {
    const std::size_t n = f.u.rows();
    const auto proj = kernels::matvec_t(f.u, y_star);  // Uᵀ y*
    double range_term = 0.0;
    double proj_sq = 0.0;
    for (std::size_t l = 0; l < proj.size(); ++l) {
        proj_sq += proj[l] * proj[l];
        if (lambda > 0.0) {
            const double s2 = f.singular_values[l] * f.singular_values[l];
            const double z = proj[l] / (s2 + lambda);
            range_term += z * z;
        }
    }
    const double perp_sq = std::max(0.0, kernels::norm2_sq(y_star) - proj_sq);

    BiasVarParts parts;
    if (lambda > 0.0) {
        // ‖(H−I)y*‖² = λ²(‖range part‖² + ‖off-range part‖²/λ²)
        parts.bias_sq = (lambda * lambda * range_term + perp_sq) / static_cast<double>(n);
    } else {
        double in_range_beyond = 0.0;
        for (std::size_t l = f.numerical_rank; l < proj.size(); ++l) {
            in_range_beyond += proj[l] * proj[l];
        }
        parts.bias_sq = (perp_sq + in_range_beyond) / static_cast<double>(n);
    }
    double tr = 0.0;
    for (std::size_t l = 0; l < f.singular_values.size(); ++l) {
        const double s2 = f.singular_values[l] * f.singular_values[l];
        if (lambda > 0.0) {
            const double h = s2 / (s2 + lambda);
            tr += h * h;
        } else if (l < f.numerical_rank) {
            tr += 1.0;
        }
    }
    parts.variance_unit = tr / static_cast<double>(n);
    return parts;
}

void require_sigma(double sigma_sq) {
    if (sigma_sq < 0.0) throw InvalidInput("risk: sigma_sq must be non-negative");
}

}  // namespace

RidgeModel ridge_fit(const DenseMatrix& design, const std::vector<double>& y, std::size_t k) {
    if (y.size() != design.rows()) throw InvalidInput("ridge_fit: response length mismatch");
    if (k == 0) throw InvalidInput("ridge_fit: k must be positive");
    const SvdFactors f = svd(design);
    if (k > f.singular_values.size()) throw RankError("ridge_fit: k exceeds dimensions");
    const double lambda = ridge_lambda2(f, k);
    if (lambda <= 0.0 && f.numerical_rank < design.cols()) {
        throw SingularSystem("ridge_fit: zero regularizer on a rank-deficient design");
    }

    const auto uty = kernels::matvec_t(f.u, y);
    std::vector<double> coef(uty.size(), 0.0);
    for (std::size_t l = 0; l < coef.size(); ++l) {
        const double s = f.singular_values[l];
        if (lambda > 0.0) {
            coef[l] = uty[l] * s / (s * s + lambda);
        } else if (l < f.numerical_rank) {
            coef[l] = uty[l] / s;
        }
    }
    RidgeModel model;
    model.design = design;
    model.k = k;
    model.lambda2 = lambda;
    model.coefficients = kernels::matvec(f.v, coef);
    return model;
}

std::vector<double> predict(const RidgeModel& model) {
    return kernels::matvec(model.design, model.coefficients);
}

RiskReport risk_closed_form_target(const DenseMatrix& design, const std::vector<double>& y_star,
                                   double sigma_sq, std::size_t k) {
    if (y_star.size() != design.rows()) throw InvalidInput("risk: target length mismatch");
    if (k == 0) throw InvalidInput("risk: k must be positive");
    require_sigma(sigma_sq);
    const SvdFactors f = svd(design);
    if (k > f.singular_values.size()) throw RankError("risk: k exceeds dimensions");
    const double lambda = ridge_lambda2(f, k);
    const BiasVarParts parts = bias_variance_parts(f, lambda, y_star);

    RiskReport r;
    r.bias_sq = parts.bias_sq;
    r.variance = sigma_sq * sigma_sq * parts.variance_unit;
    r.risk = r.bias_sq + r.variance;
    r.method = RiskMethod::ClosedForm;
    return r;
}

RiskReport risk_closed_form(const DenseMatrix& a, const std::vector<double>& x_star,
                            double sigma_sq, std::size_t k) {
    if (x_star.size() != a.cols()) throw InvalidInput("risk: coefficient length mismatch");
    return risk_closed_form_target(a, kernels::matvec(a, x_star), sigma_sq, k);
}

RiskReport risk_monte_carlo(const DenseMatrix& a, const std::vector<double>& x_star,
                            double sigma_sq, std::size_t k, std::size_t trials,
                            std::uint64_t seed) {
    if (x_star.size() != a.cols()) throw InvalidInput("risk: coefficient length mismatch");
    if (trials < 100) throw InvalidInput("risk_monte_carlo: need at least 100 trials");
    require_sigma(sigma_sq);
    const SvdFactors f = svd(a);
    if (k == 0 || k > f.singular_values.size()) throw RankError("risk: bad k");
    const double lambda = ridge_lambda2(f, k);
    const std::size_t n = a.rows();

    const auto y_star = kernels::matvec(a, x_star);
    const DenseMatrix hat = hat_matrix(f, lambda);
    auto mu = kernels::matvec(hat, y_star);  // (H−I)y* precomputed
    for (std::size_t i = 0; i < n; ++i) mu[i] -= y_star[i];

    if (sigma_sq == 0.0) {
        // Every trial evaluates the same deterministic loss.
        RiskReport r;
        r.risk = kernels::norm2_sq(mu) / static_cast<double>(n);
        r.bias_sq = r.risk;
        r.variance = 0.0;
        r.method = RiskMethod::MonteCarlo;
        r.trials = trials;
        r.std_error = 0.0;
        return r;
    }

    std::vector<double> losses(trials, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t t = 0; t < trials; ++t) {
        auto eng = rng::substream(seed, t);
        std::vector<double> xi = rng::gaussian_vector(eng, n);
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double h_xi = kernels::dot(hat.row(i), xi.data(), n);
            const double e = mu[i] + sigma_sq * h_xi;
            loss += e * e;
        }
        losses[t] = loss / static_cast<double>(n);
    }

    double mean = 0.0;
    for (double l : losses) mean += l;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double l : losses) var += (l - mean) * (l - mean);
    var /= static_cast<double>(trials > 1 ? trials - 1 : 1);

    RiskReport r;
    r.risk = mean;
    r.method = RiskMethod::MonteCarlo;
    r.trials = trials;
    r.std_error = std::sqrt(var / static_cast<double>(trials));
    // The split is not observable per trial; report the closed-form bias.
    const BiasVarParts parts = bias_variance_parts(f, lambda, y_star);
    r.bias_sq = parts.bias_sq;
    r.variance = mean - parts.bias_sq;
    return r;
}

std::vector<double> simulate_linear(const DenseMatrix& a, const std::vector<double>& x_star,
                                    double sigma_sq, std::uint64_t seed) {
    if (x_star.size() != a.cols()) throw InvalidInput("simulate_linear: length mismatch");
    require_sigma(sigma_sq);
    auto y = kernels::matvec(a, x_star);
    auto eng = rng::engine(seed);
    const auto xi = rng::gaussian_vector(eng, y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma_sq * xi[i];
    return y;
}

GuaranteeReport check_risk_bound(const DenseMatrix& a, const SelectionResult& sel,
                                 const std::vector<double>& x_star, double sigma_sq) {
    if (x_star.size() != a.cols()) throw InvalidInput("check_risk_bound: length mismatch");
    require_sigma(sigma_sq);
    const double eps = sel.epsilon;
    const std::size_t k = sel.k;
    const double alpha = kPcpAlpha;
    const double beta = risk_beta();
    const double bound = 1.0 + beta * eps;

    const RiskReport risk_a = risk_closed_form(a, x_star, sigma_sq, k);
    const auto y_star = kernels::matvec(a, x_star);
    const RiskReport risk_c = risk_closed_form_target(sel.c, y_star, sigma_sq, k);

    double ratio;
    constexpr double tiny = 1e-300;
    if (risk_a.risk <= tiny) {
        ratio = risk_c.risk <= tiny ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        ratio = risk_c.risk / risk_a.risk;
    }

    GuaranteeReport r;
    r.guarantee = Guarantee::Risk;
    r.in_theorem_range = eps < 1.0 / (2.0 * alpha);
    r.lhs_value = ratio;
    r.bound_value = bound;
    r.margin = bound - ratio;
    r.tolerance = 1e-9;
    r.passed = r.margin >= -r.tolerance;
    r.details = {{"risk_a", risk_a.risk},
                 {"risk_c", risk_c.risk},
                 {"bias_sq_a", risk_a.bias_sq},
                 {"bias_sq_c", risk_c.bias_sq},
                 {"variance_a", risk_a.variance},
                 {"variance_c", risk_c.variance},
                 {"ratio", ratio},
                 {"beta", beta},
                 {"alpha", alpha},
                 {"epsilon", eps},
                 {"sigma_sq", sigma_sq},
                 {"k", static_cast<double>(k)}};
    return r;
}

double elastic_net_risk_bound(const DenseMatrix& a, std::size_t k, double lambda1,
                              double risk_a) {
    if (risk_a < 0.0) throw InvalidInput("elastic_net_risk_bound: negative risk");
    if (lambda1 < 0.0) throw InvalidInput("elastic_net_risk_bound: negative lambda1");
    if (k == 0) throw InvalidInput("elastic_net_risk_bound: k must be positive");
    const SvdFactors f = svd(a);
    if (k > f.singular_values.size()) throw RankError("elastic_net_risk_bound: k too large");
    const double tail = static_cast<double>(k) * ridge_lambda2(f, k);
    if (!(tail > 0.0)) {
        throw DegenerateInput("elastic_net_risk_bound: zero spectral tail");
    }
    const double smax = f.singular_values.front();
    const double d = static_cast<double>(a.cols());
    const double kk = static_cast<double>(k);
    return risk_a + lambda1 * lambda1 * 4.0 * d * smax * smax * kk * kk / (tail * tail);
}

}  // namespace drls
