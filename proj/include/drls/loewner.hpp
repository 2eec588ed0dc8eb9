#pragma once

#include "drls/dense_matrix.hpp"

namespace drls {

/// Outcome of testing f ⪯ g. margin is the smallest eigenvalue of g − f; the
/// ordering holds when margin >= -tol * scale with scale = max(‖f‖₂, ‖g‖₂, 1).
struct LoewnerVerdict {
    bool holds = false;
    double margin = 0.0;
    double scale = 1.0;
};

LoewnerVerdict loewner_leq(const DenseMatrix& f, const DenseMatrix& g, double tol);

}  // namespace drls
