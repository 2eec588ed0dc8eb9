#include "drls/eigen_sym.hpp"

#include <algorithm>
#include <cmath>

#include "drls/errors.hpp"

namespace drls {

namespace {

double offdiag_norm_sq(const DenseMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) s += 2.0 * m(i, j) * m(i, j);
    }
    return s;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(DenseMatrix m) {
    if (m.rows() != m.cols()) throw InvalidInput("symmetric_eigenvalues: matrix not square");
    m.require_finite("symmetric_eigenvalues");
    const std::size_t n = m.rows();
    // Average away rounding asymmetry; structural asymmetry is caught upstream.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    }

    double diag_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_sq += m(i, i) * m(i, i);
    const double total = std::sqrt(diag_sq + offdiag_norm_sq(m));
    const double stop = 1e-14 * (total > 0.0 ? total : 1.0);

    constexpr int max_sweeps = 50;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (std::sqrt(offdiag_norm_sq(m)) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::fabs(apq) <= 1e-300) {
                    m(p, q) = 0.0;
                    m(q, p) = 0.0;
                    continue;
                }
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = m(p, p), aqq = m(q, q);
                m(p, p) = app - t * apq;
                m(q, q) = aqq + t * apq;
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = m(r, p), arq = m(r, q);
                    m(r, p) = c * arp - s * arq;
                    m(p, r) = m(r, p);
                    m(r, q) = s * arp + c * arq;
                    m(q, r) = m(r, q);
                }
            }
        }
    }

    std::vector<double> evals(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = m(i, i);
    std::sort(evals.begin(), evals.end(), std::greater<double>());
    return evals;
}

double spectral_norm_symmetric(const DenseMatrix& m) {
    const auto evals = symmetric_eigenvalues(m);
    if (evals.empty()) return 0.0;
    return std::max(std::fabs(evals.front()), std::fabs(evals.back()));
}

}  // namespace drls
