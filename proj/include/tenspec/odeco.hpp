#pragma once

#include <cstdint>
#include <vector>

#include "tenspec/error.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

class OdecoError : public Error {
public:
    enum class Kind { NonOrthonormal, NonPositiveWeight, RankTooLarge, ShapeMismatch };

    OdecoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Σ_i α_i u_i^(1) ⊗ ⋯ ⊗ u_i^(D) with α_1 ≥ ⋯ ≥ α_r > 0 and orthonormal
// columns u_1^(d), ..., u_r^(d) in factor d (n_d × r). Only make_odeco
// constructs one, so every instance is valid.
class OdecoRep {
public:
    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return alphas_.size(); }
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    const std::vector<Matrix>& factors() const noexcept { return factors_; }

private:
    friend OdecoRep make_odeco(std::vector<double>, std::vector<Matrix>, const Shape&);
    OdecoRep() = default;

    Shape shape_;
    std::vector<double> alphas_;
    std::vector<Matrix> factors_;
};

// Validates at tolerance 1e-10, drops exactly-zero weights, and sorts the
// weights descending (stable) with the factor columns permuted alongside.
OdecoRep make_odeco(std::vector<double> alphas, std::vector<Matrix> factors, const Shape& shape);

DenseTensor to_dense(const OdecoRep& rep);

// Core diag(α) zero-padded, factors completed to orthogonal n_d×n_d matrices.
Hosvd odeco_hosvd(const OdecoRep& rep);

// α = sorted |gaussian| + 0.1; factors are the first r columns of seeded
// random orthogonal matrices.
OdecoRep random_odeco(const Shape& shape, std::size_t rank, std::uint64_t seed);

// One factor shared by all D modes, so the dense tensor is symmetric.
OdecoRep random_symmetric_odeco(std::size_t n, std::size_t order, std::size_t rank, std::uint64_t seed);

}  // namespace tenspec
