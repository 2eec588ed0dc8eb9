// Times the OpenMP kernels against their serial references and checks that the
// two produce identical bytes. Sizes are chosen so each case runs in well under
// a second on one core.
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "drls/dense_matrix.hpp"
#include "drls/guarantees.hpp"
#include "drls/kernels.hpp"
#include "drls/regression.hpp"
#include "drls/rng.hpp"
#include "drls/select.hpp"
#include "drls/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, double max_diff) {
    std::printf("%-22s serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g\n", name,
                serial_s, parallel_s, serial_s / parallel_s, max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled (serial build)\n");
#endif

    auto eng = drls::rng::engine(7);
    const drls::DenseMatrix a = drls::rng::gaussian_matrix(256, 256, eng);
    const drls::DenseMatrix b = drls::rng::gaussian_matrix(256, 256, eng);
    const drls::DenseMatrix wide = drls::rng::gaussian_matrix(200, 1600, eng);

    {
        drls::DenseMatrix out_s, out_p;
        const double ts = time_best_of(3, [&] { out_s = drls::kernels::serial::matmul(a, b); });
        const double tp = time_best_of(3, [&] { out_p = drls::kernels::matmul(a, b); });
        report("matmul 256^3", ts, tp, drls::kernels::max_abs_diff(out_s, out_p));
    }
    {
        drls::DenseMatrix out_s, out_p;
        const double ts =
            time_best_of(3, [&] { out_s = drls::kernels::serial::gram_aat(wide); });
        const double tp = time_best_of(3, [&] { out_p = drls::kernels::gram_aat(wide); });
        report("gram 200x1600", ts, tp, drls::kernels::max_abs_diff(out_s, out_p));
    }
    {
        drls::DenseMatrix out_s, out_p;
        const double ts =
            time_best_of(3, [&] { out_s = drls::kernels::serial::transpose(wide); });
        const double tp = time_best_of(3, [&] { out_p = drls::kernels::transpose(wide); });
        report("transpose 200x1600", ts, tp, drls::kernels::max_abs_diff(out_s, out_p));
    }

    // Whole-operation timings (each is parallel inside when OpenMP is on).
    const auto sigma = drls::synth::make_spectrum(drls::synth::SpectrumKind::PowerLaw, 1.0, 60);
    const drls::DenseMatrix m = drls::synth::random_with_spectrum(100, 400, sigma, 11);
    const auto sel = drls::drls_select(m, 3, 0.1);
    {
        const double t = time_best_of(2, [&] {
            drls::check_pcp(m, sel, 200, 5);
        });
        std::printf("%-22s %8.4fs (200 projections)\n", "pcp sweep 100x400", t);
    }
    {
        auto eng2 = drls::rng::engine(13);
        const auto x_star = drls::rng::gaussian_vector(eng2, m.cols());
        const double t = time_best_of(2, [&] {
            drls::risk_monte_carlo(m, x_star, 1.0, 3, 5000, 17);
        });
        std::printf("%-22s %8.4fs (5000 trials)\n", "monte carlo risk", t);
    }
    return 0;
}
