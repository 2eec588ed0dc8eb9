#include "drls/loewner.hpp"

#include <algorithm>
#include <cmath>

#include "drls/eigen_sym.hpp"
#include "drls/errors.hpp"
#include "drls/kernels.hpp"

namespace drls {

namespace {

void require_symmetric(const DenseMatrix& m, const char* name) {
    if (m.rows() != m.cols()) throw InvalidInput(std::string(name) + ": matrix not square");
    double maxabs = 0.0;
    for (double x : m.entries()) maxabs = std::max(maxabs, std::fabs(x));
    if (kernels::max_abs_asymmetry(m) > 1e-8 * (1.0 + maxabs)) {
        throw InvalidInput(std::string(name) + ": matrix not symmetric");
    }
}

}  // namespace

LoewnerVerdict loewner_leq(const DenseMatrix& f, const DenseMatrix& g, double tol) {
    if (tol < 0.0) throw InvalidInput("loewner_leq: negative tolerance");
    if (f.rows() != g.rows() || f.cols() != g.cols()) {
        throw InvalidInput("loewner_leq: shape mismatch");
    }
    require_symmetric(f, "loewner_leq(f)");
    require_symmetric(g, "loewner_leq(g)");

    const DenseMatrix diff = kernels::linear_combination(1.0, g, -1.0, f);
    const auto evals = symmetric_eigenvalues(diff);
    LoewnerVerdict v;
    v.margin = evals.empty() ? 0.0 : evals.back();
    v.scale = std::max({spectral_norm_symmetric(f), spectral_norm_symmetric(g), 1.0});
    v.holds = v.margin >= -tol * v.scale;
    return v;
}

}  // namespace drls
