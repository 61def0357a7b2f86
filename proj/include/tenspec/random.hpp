#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

// splitmix64 mix of (seed, index); per-trial seeds come from here so that
// sampled results do not depend on how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double gaussian() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    std::vector<double> gaussian_vector(std::size_t n);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

// I.i.d. standard normal entries.
DenseTensor random_gaussian(const Shape& shape, std::uint64_t seed);
Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace tenspec
