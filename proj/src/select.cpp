#include "drls/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drls/errors.hpp"
#include "drls/svd.hpp"

namespace drls {

namespace {

constexpr double kTieTolerance = 1e-12;

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidInput("drls: epsilon must lie in (0, 1)");
    }
}

}  // namespace

SelectionPlan select_from_scores(const std::vector<double>& scores, std::size_t k,
                                 double epsilon) {
    require_epsilon(epsilon);
    if (k == 0) throw InvalidInput("drls: k must be positive");
    const std::size_t d = scores.size();
    if (d == 0) throw InvalidInput("drls: no columns");
    if (k > d) throw InvalidInput("drls: k exceeds column count");

    SelectionPlan plan;
    plan.order.resize(d);
    std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
    std::stable_sort(plan.order.begin(), plan.order.end(), [&](std::size_t x, std::size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return x < y;
    });

    plan.total = 0.0;
    for (std::size_t i : plan.order) plan.total += scores[i];

    const double stop_level = plan.total - epsilon;
    double kept = 0.0;
    std::size_t take = 0;
    while (take < d) {
        kept += scores[plan.order[take]];
        ++take;
        if (kept > stop_level) break;
    }
    if (take < k) take = k;
    plan.take = take;
    plan.threshold = scores[plan.order[take - 1]];

    double residual = 0.0;
    for (std::size_t i = take; i < d; ++i) residual += scores[plan.order[i]];
    plan.residual = residual;

    plan.tie_at_threshold = false;
    for (std::size_t i = take; i < d; ++i) {
        if (std::fabs(scores[plan.order[i]] - plan.threshold) <= kTieTolerance) {
            plan.tie_at_threshold = true;
            break;
        }
    }
    return plan;
}

SelectionResult drls_select(const DenseMatrix& a, const LeverageScores& ridge, std::size_t k,
                            double epsilon) {
    if (ridge.kind != ScoreKind::Ridge || ridge.k != k) {
        throw InvalidInput("drls_select: scores do not match requested k");
    }
    if (ridge.scores.size() != a.cols()) {
        throw InvalidInput("drls_select: scores do not match matrix width");
    }
    const SelectionPlan plan = select_from_scores(ridge.scores, k, epsilon);

    SelectionResult out;
    out.theta.assign(plan.order.begin(), plan.order.begin() + plan.take);
    out.threshold = plan.threshold;
    out.residual = plan.residual;
    out.epsilon = epsilon;
    out.k = k;
    out.tie_at_threshold = plan.tie_at_threshold;

    const std::size_t d = a.cols();
    out.selection = DenseMatrix(d, plan.take, 0.0);
    out.c = DenseMatrix(a.rows(), plan.take, 0.0);
    for (std::size_t j = 0; j < plan.take; ++j) {
        const std::size_t src = out.theta[j];
        out.selection(src, j) = 1.0;
        for (std::size_t i = 0; i < a.rows(); ++i) out.c(i, j) = a(i, src);
    }
    return out;
}

SelectionResult drls_select(const DenseMatrix& a, std::size_t k, double epsilon) {
    require_epsilon(epsilon);
    const SvdFactors f = svd(a);
    if (f.numerical_rank < k) throw RankError("drls_select: rank below k");
    return drls_select(a, ridge_leverage_scores(f, k), k, epsilon);
}

std::size_t power_law_column_bound(std::size_t k, double epsilon, double decay_power) {
    require_epsilon(epsilon);
    if (k == 0) throw InvalidInput("power_law_column_bound: k must be positive");
    if (!(decay_power > 1.0)) {
        throw InvalidInput("power_law_column_bound: decay power must exceed 1");
    }
    const double a = decay_power;
    const double kk = static_cast<double>(k);
    const double first = std::pow(4.0 * kk / epsilon, 1.0 / a) - 1.0;
    const double second = std::pow(4.0 * kk / ((a - 1.0) * epsilon), 1.0 / (a - 1.0)) - 1.0;
    const double v = std::max({first, second, kk});
    // Forgive upward rounding noise so exact-integer cases stay exact.
    const double nudged = v - 1e-9 * std::max(1.0, std::fabs(v));
    return static_cast<std::size_t>(std::ceil(nudged));
}

PowerLawFit fit_power_law_sorted(const std::vector<double>& sorted_scores, IndexRange range) {
    if (range.lo < 1 || range.hi > sorted_scores.size() || range.hi < range.lo) {
        throw InvalidInput("fit_power_law: bad range");
    }
    const std::size_t count = range.hi - range.lo + 1;
    if (count < 2) throw InvalidInput("fit_power_law: range must hold at least 2 scores");
    for (std::size_t i = range.lo; i <= range.hi; ++i) {
        if (!(sorted_scores[i - 1] > 0.0)) {
            throw InvalidInput("fit_power_law: scores in range must be positive");
        }
        if (i > range.lo && sorted_scores[i - 1] > sorted_scores[i - 2]) {
            throw InvalidInput("fit_power_law: scores not sorted descending over range");
        }
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = range.lo; i <= range.hi; ++i) {
        const double x = std::log(static_cast<double>(i));
        const double y = std::log(sorted_scores[i - 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InvalidInput("fit_power_law: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    PowerLawFit fit;
    fit.decay_power = -slope;
    fit.scale = std::exp(intercept);
    fit.fit_range = range;
    double rss = 0.0;
    for (std::size_t i = range.lo; i <= range.hi; ++i) {
        const double x = std::log(static_cast<double>(i));
        const double r = std::log(sorted_scores[i - 1]) - (intercept + slope * x);
        rss += r * r;
    }
    fit.residual_norm = std::sqrt(rss);
    return fit;
}

PowerLawFit fit_power_law(const LeverageScores& scores, IndexRange range) {
    return fit_power_law_sorted(scores.scores, range);
}

}  // namespace drls
