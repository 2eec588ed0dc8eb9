#include "drls/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drls/errors.hpp"
#include "drls/haar.hpp"
#include "drls/kernels.hpp"
#include "drls/rng.hpp"

namespace drls::synth {

namespace {

double weighted_row_norm(const DenseMatrix& v, const std::vector<double>& w, std::size_t i) {
    double s = 0.0;
    const double* row = v.row(i);
    for (std::size_t l = 0; l < w.size(); ++l) s += w[l] * row[l] * row[l];
    return s;
}

void check_monotone(const std::vector<double>& x, const char* what) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] > x[i - 1] + 1e-12) {
            throw InvalidInput(std::string(what) + ": values must be non-increasing");
        }
    }
}

}  // namespace

std::vector<double> make_spectrum(SpectrumKind kind, double param, std::size_t count) {
    if (count == 0) throw InvalidInput("make_spectrum: empty spectrum");
    std::vector<double> s(count, 1.0);
    switch (kind) {
        case SpectrumKind::PowerLaw:
            if (!(param > 0.0)) throw InvalidInput("make_spectrum: power must be positive");
            for (std::size_t i = 0; i < count; ++i) {
                s[i] = std::pow(static_cast<double>(i + 1), -param);
            }
            break;
        case SpectrumKind::Exponential:
            if (!(param > 0.0)) throw InvalidInput("make_spectrum: rate must be positive");
            for (std::size_t i = 0; i < count; ++i) {
                s[i] = std::exp(-param * static_cast<double>(i));
            }
            break;
        case SpectrumKind::Flat:
            break;
    }
    return s;
}

DenseMatrix random_with_spectrum(std::size_t n, std::size_t d, const std::vector<double>& sigma,
                                 std::uint64_t seed) {
    const std::size_t r = sigma.size();
    if (r == 0 || r > std::min(n, d)) {
        throw InvalidInput("random_with_spectrum: bad spectrum length");
    }
    check_monotone(sigma, "random_with_spectrum");
    auto eng = rng::engine(seed);
    const DenseMatrix u = haar_orthonormal(n, r, eng);
    const DenseMatrix v = haar_orthonormal(d, r, eng);
    return kernels::matmul_a_bt(kernels::scale_cols(u, sigma), v);
}

DenseMatrix orthonormal_with_row_norms(const std::vector<double>& weights,
                                       const std::vector<double>& targets) {
    const std::size_t r = weights.size();
    const std::size_t d = targets.size();
    if (r == 0 || d < r) throw InvalidInput("orthonormal_with_row_norms: need r <= d");
    check_monotone(weights, "orthonormal_with_row_norms(weights)");
    check_monotone(targets, "orthonormal_with_row_norms(targets)");
    for (double w : weights) {
        if (!(w > 0.0)) throw InvalidInput("orthonormal_with_row_norms: weights must be positive");
    }
    for (double t : targets) {
        if (t < -1e-12) throw InvalidInput("orthonormal_with_row_norms: negative target");
    }

    double wsum = 0.0;
    for (double w : weights) wsum += w;
    const double scale = std::max(1.0, wsum);
    {
        double tpart = 0.0, wpart = 0.0;
        for (std::size_t m = 0; m < d; ++m) {
            tpart += targets[m];
            if (m < r) wpart += weights[m];
            if (tpart > wpart + 1e-9 * scale) {
                throw InvalidInput("orthonormal_with_row_norms: targets not majorized by weights");
            }
        }
        if (std::fabs(tpart - wsum) > 1e-9 * scale) {
            throw InvalidInput("orthonormal_with_row_norms: target sum differs from weight sum");
        }
    }

    DenseMatrix v(d, r, 0.0);
    std::vector<double> cur(d, 0.0);
    for (std::size_t l = 0; l < r; ++l) {
        v(l, l) = 1.0;
        cur[l] = weights[l];
    }
    std::vector<bool> active(d, true);
    std::vector<std::size_t> assignment(d, 0);

    for (std::size_t step = 0; step < d; ++step) {
        const double x = targets[step];
        std::vector<std::size_t> act;
        act.reserve(d - step);
        for (std::size_t i = 0; i < d; ++i) {
            if (active[i]) act.push_back(i);
        }
        if (act.size() == 1) {
            assignment[step] = act[0];
            active[act[0]] = false;
            break;
        }
        std::stable_sort(act.begin(), act.end(),
                         [&](std::size_t p, std::size_t q) { return cur[p] > cur[q]; });

        // Exact or near match: finish without rotating.
        std::size_t direct = act.size();
        for (std::size_t idx = 0; idx < act.size(); ++idx) {
            if (std::fabs(cur[act[idx]] - x) <= 1e-13 * scale) {
                direct = idx;
                break;
            }
        }
        if (direct == act.size() && x > cur[act.front()]) {
            if (x - cur[act.front()] <= 1e-9 * scale) {
                direct = 0;
            } else {
                throw Error("orthonormal_with_row_norms: target above reachable range");
            }
        }
        if (direct == act.size() && x < cur[act.back()]) {
            if (cur[act.back()] - x <= 1e-9 * scale) {
                direct = act.size() - 1;
            } else {
                throw Error("orthonormal_with_row_norms: target below reachable range");
            }
        }
        if (direct != act.size()) {
            assignment[step] = act[direct];
            active[act[direct]] = false;
            continue;
        }

        // Adjacent straddling pair: cur[hi] > x > cur[lo].
        std::size_t hi = act[0], lo = act[1];
        for (std::size_t idx = 0; idx + 1 < act.size(); ++idx) {
            if (cur[act[idx]] > x && x > cur[act[idx + 1]]) {
                hi = act[idx];
                lo = act[idx + 1];
                break;
            }
        }
        const double chi = cur[hi], clo = cur[lo];
        const double c2 = (x - clo) / (chi - clo);
        const double c = std::sqrt(c2);
        const double s = std::sqrt(std::max(0.0, 1.0 - c2));
        for (std::size_t l = 0; l < r; ++l) {
            const double vh = v(hi, l), vl = v(lo, l);
            v(hi, l) = c * vh + s * vl;
            v(lo, l) = -s * vh + c * vl;
        }
        cur[hi] = weighted_row_norm(v, weights, hi);
        cur[lo] = weighted_row_norm(v, weights, lo);
        assignment[step] = hi;
        active[hi] = false;
    }

    DenseMatrix out(d, r, 0.0);
    for (std::size_t sidx = 0; sidx < d; ++sidx) {
        const double* src = v.row(assignment[sidx]);
        double* dst = out.row(sidx);
        for (std::size_t l = 0; l < r; ++l) dst[l] = src[l];
    }
    return out;
}

PowerLawDesign design_power_law_scores(std::size_t d, std::size_t k, double a) {
    PowerLawDesign design;
    if (d < 2 || k == 0 || k >= d) throw InvalidInput("design_power_law_scores: bad (d, k)");
    if (!(a > 1.0)) throw InvalidInput("design_power_law_scores: decay power must exceed 1");

    std::vector<double> profile(d);
    double harmonic = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        profile[i] = std::pow(static_cast<double>(i + 1), -a);
        harmonic += profile[i];
    }
    double head_profile = 0.0;
    for (std::size_t i = 0; i < k; ++i) head_profile += profile[i];

    constexpr double cap = 0.999;
    const double t1_min = static_cast<double>(k) / harmonic;
    if (t1_min > cap) {
        design.reason =
            "score sum t1*sum(i^-a) cannot reach k with every score at most 1";
        return design;
    }
    // Necessary tail-mass condition: weights beyond position k obey
    // sum w/(1-w) = k, so their mass is at least k/(k+1).
    const double min_tail_mass = static_cast<double>(k) / (static_cast<double>(k) + 1.0);
    if (cap * (harmonic - head_profile) < min_tail_mass) {
        design.reason = "tail weight mass k/(k+1) exceeds the available score tail";
        return design;
    }

    const double kk = static_cast<double>(k);
    for (int ti = 0; ti <= 220; ++ti) {
        const double t1 = 0.998 - 0.0025 * static_cast<double>(ti);
        if (t1 < t1_min * (1.0 + 1e-9) || t1 <= 0.0) break;
        const double total = t1 * harmonic;
        const double head_targets = t1 * head_profile;
        for (int ui = 0; ui < 97; ++ui) {
            const double u = 0.98 - 0.01 * static_cast<double>(ui);
            const double gu = u / (1.0 - u);
            const auto n_full = static_cast<std::size_t>(std::floor(kk / gu + 1e-12));
            double gv = kk - static_cast<double>(n_full) * gu;
            double vweight = 0.0;
            std::size_t m_tail = n_full;
            if (gv > 1e-12) {
                if (gv < 1e-6) continue;  // nearly-zero weight would wreck conditioning
                vweight = gv / (1.0 + gv);
                ++m_tail;
            }
            if (m_tail == 0) continue;
            if (k + m_tail > d) continue;
            const double tail_mass = static_cast<double>(n_full) * u + vweight;
            const double head_mass = total - tail_mass;
            if (head_mass < head_targets - 1e-12) continue;
            if (head_mass > cap * kk) continue;

            // Water-fill the head: w_i = max(t_i, L) with the level L chosen so
            // the head mass matches; keeps every head weight at least its target.
            double lo = 0.0, hi2 = head_mass / kk + 1.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi2);
                double mass = 0.0;
                for (std::size_t i = 0; i < k; ++i) mass += std::max(t1 * profile[i], mid);
                if (mass < head_mass) {
                    lo = mid;
                } else {
                    hi2 = mid;
                }
            }
            const double level = 0.5 * (lo + hi2);
            std::vector<double> head(k);
            double head_sum = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                head[i] = std::max(t1 * profile[i], level);
                head_sum += head[i];
            }
            // Absorb the bisection residue into the first entry with room.
            double residue = head_mass - head_sum;
            for (std::size_t i = 0; i < k && std::fabs(residue) > 0.0; ++i) {
                const double adjusted = head[i] + residue;
                const double floor_i = t1 * profile[i];
                const double ceil_i = (i == 0) ? cap : head[i - 1];
                if (adjusted >= floor_i && adjusted <= ceil_i) {
                    head[i] = adjusted;
                    residue = 0.0;
                }
            }
            if (std::fabs(residue) > 1e-10) continue;
            if (head.front() > cap) continue;
            const double tail_max = n_full > 0 ? u : vweight;
            if (head.back() < tail_max - 1e-12) continue;

            std::vector<double> weights = head;
            for (std::size_t i = 0; i < n_full; ++i) weights.push_back(u);
            if (vweight > 0.0) weights.push_back(vweight);

            std::vector<double> targets(d);
            for (std::size_t i = 0; i < d; ++i) targets[i] = t1 * profile[i];

            bool major = true;
            double tpart = 0.0, wpart = 0.0;
            for (std::size_t m = 0; m < d && major; ++m) {
                tpart += targets[m];
                if (m < weights.size()) wpart += weights[m];
                if (tpart > wpart + 1e-9) major = false;
            }
            if (!major) continue;

            design.feasible = true;
            design.t1 = t1;
            design.targets = std::move(targets);
            design.weights = std::move(weights);
            return design;
        }
    }
    design.reason = "no feasible spectral weight design found";
    return design;
}

std::optional<PowerLawMatrix> power_law_ridge_matrix(std::size_t d, std::size_t k, double a,
                                                     std::uint64_t seed, std::size_t rows) {
    PowerLawDesign design = design_power_law_scores(d, k, a);
    if (!design.feasible) return std::nullopt;
    const std::size_t r = design.weights.size();
    std::size_t n = rows == 0 ? r + 4 : rows;
    if (n < r) throw InvalidInput("power_law_ridge_matrix: rows below required rank");

    std::vector<double> sigma(r);
    for (std::size_t l = 0; l < r; ++l) {
        sigma[l] = std::sqrt(design.weights[l] / (1.0 - design.weights[l]));
    }
    const DenseMatrix v = orthonormal_with_row_norms(design.weights, design.targets);
    auto eng = rng::engine(seed);
    const DenseMatrix u = haar_orthonormal(n, r, eng);

    PowerLawMatrix out;
    out.matrix = kernels::matmul_a_bt(kernels::scale_cols(u, sigma), v);
    out.targets = design.targets;
    out.t1 = design.t1;
    return out;
}

}  // namespace drls::synth
