#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"

using namespace drls;

TEST_CASE("matmul matches a hand-computed product") {
    const DenseMatrix a{{1, 2}, {3, 4}};
    const DenseMatrix b{{5, 6}, {7, 8}};
    const DenseMatrix expect{{19, 22}, {43, 50}};
    CHECK(kernels::matmul(a, b) == expect);
    CHECK(kernels::serial::matmul(a, b) == expect);
    CHECK_THROWS_AS(kernels::matmul(a, DenseMatrix(3, 2, 1.0)), InvalidInput);
}

TEST_CASE("parallel kernels are bitwise identical to the serial references") {
    // Shapes straddle the parallel cutoff, including odd sizes.
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{
        {3, 5}, {17, 31}, {64, 64}, {41, 113}, {128, 96}};
    auto eng = rng::engine(2718);
    for (auto [n, d] : shapes) {
        const DenseMatrix a = rng::gaussian_matrix(n, d, eng);
        const DenseMatrix b = rng::gaussian_matrix(d, n, eng);
        const DenseMatrix c = rng::gaussian_matrix(n, 7, eng);
        CHECK(kernels::matmul(a, b) == kernels::serial::matmul(a, b));
        CHECK(kernels::matmul_at_b(a, c) == kernels::serial::matmul_at_b(a, c));
        CHECK(kernels::gram_aat(a) == kernels::serial::gram_aat(a));
    }
}

TEST_CASE("parallel and serial agree elementwise on every kernel") {
    auto eng = rng::engine(99);
    const DenseMatrix a = rng::gaussian_matrix(37, 53, eng);
    const DenseMatrix b = rng::gaussian_matrix(53, 29, eng);
    const DenseMatrix c = rng::gaussian_matrix(37, 29, eng);
    const std::vector<double> x = rng::gaussian_vector(eng, 53);
    const std::vector<double> xt = rng::gaussian_vector(eng, 37);

    CHECK(kernels::matmul(a, b) == kernels::serial::matmul(a, b));
    CHECK(kernels::matmul_at_b(a, c) == kernels::serial::matmul_at_b(a, c));
    CHECK(kernels::matmul_a_bt(a, kernels::transpose(b)) ==
          kernels::serial::matmul_a_bt(a, kernels::serial::transpose(b)));
    CHECK(kernels::gram_aat(a) == kernels::serial::gram_aat(a));
    CHECK(kernels::gram_ata(a) == kernels::serial::gram_ata(a));
    CHECK(kernels::transpose(a) == kernels::serial::transpose(a));
    CHECK(kernels::matvec(a, x) == kernels::serial::matvec(a, x));
    CHECK(kernels::matvec_t(a, xt) == kernels::serial::matvec_t(a, xt));
}

TEST_CASE("gram matrices are exactly symmetric") {
    auto eng = rng::engine(4);
    const DenseMatrix a = rng::gaussian_matrix(23, 40, eng);
    CHECK(kernels::max_abs_asymmetry(kernels::gram_aat(a)) == 0.0);
    CHECK(kernels::max_abs_asymmetry(kernels::gram_ata(a)) == 0.0);
}

TEST_CASE("transpose round trip and utility kernels") {
    auto eng = rng::engine(8);
    const DenseMatrix a = rng::gaussian_matrix(6, 9, eng);
    CHECK(kernels::transpose(kernels::transpose(a)) == a);

    const DenseMatrix shifted = kernels::add_scaled_identity(kernels::gram_ata(a), 2.5);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(shifted(i, i) == doctest::Approx(kernels::gram_ata(a)(i, i) + 2.5));
    }
    CHECK_THROWS_AS(kernels::add_scaled_identity(a, 1.0), InvalidInput);

    const DenseMatrix sum = kernels::linear_combination(2.0, a, -1.0, a);
    CHECK(kernels::max_abs_diff(sum, a) == 0.0);

    const DenseMatrix first2 = kernels::take_cols(a, 2);
    CHECK(first2.cols() == 2);
    CHECK(first2(3, 1) == a(3, 1));

    std::vector<double> scale(9, 1.0);
    scale[0] = -2.0;
    const DenseMatrix scaled = kernels::scale_cols(a, scale);
    CHECK(scaled(2, 0) == -2.0 * a(2, 0));
    CHECK(scaled(2, 3) == a(2, 3));
}
