#include "tenspec/random.hpp"

namespace tenspec {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> Rng::gaussian_vector(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = gaussian();
    return v;
}

DenseTensor random_gaussian(const Shape& shape, std::uint64_t seed) {
    Rng rng(seed);
    return DenseTensor(shape, rng.gaussian_vector(shape.size()));
}

Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    return Matrix(rows, cols, rng.gaussian_vector(rows * cols));
}

}  // namespace tenspec
