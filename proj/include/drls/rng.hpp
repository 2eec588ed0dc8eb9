#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

/// Independent stream for (seed, index); used so per-trial work can run in any
/// order without changing results.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ED270B0A1C73D5ULL)));
}

inline void fill_gaussian(std::mt19937_64& eng, double* out, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) out[i] = dist(eng);
}

inline std::vector<double> gaussian_vector(std::mt19937_64& eng, std::size_t n) {
    std::vector<double> v(n);
    fill_gaussian(eng, v.data(), n);
    return v;
}

inline DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& eng) {
    DenseMatrix m(rows, cols);
    fill_gaussian(eng, m.data(), rows * cols);
    return m;
}

}  // namespace drls::rng
