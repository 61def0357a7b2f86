#pragma once

#include <cstdint>
#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

// M = U · Σ · Vt with U (m×m) and Vt (n×n) orthogonal and Σ the m×n
// rectangular diagonal of singular_values (length min(m,n), descending).
struct SvdResult {
    Matrix U;
    std::vector<double> singular_values;
    Matrix Vt;
};

// One-sided Jacobi SVD with a fixed sweep order. The first nonzero entry of
// every left singular vector is made nonnegative, so the result is unique for
// distinct singular values. Throws ConvergenceError after 60 sweeps.
SvdResult svd(const Matrix& m);

// Singular values only, descending, length min(rows, cols).
std::vector<double> singular_values(const Matrix& m);

// ‖M·Mᵀ − I‖_F ≤ tol; M must be square.
bool is_orthogonal(const Matrix& m, double tol);

// Haar-distributed orthogonal n×n matrix: Householder QR of a seeded
// Gaussian sample with the signs of R's diagonal folded into Q.
Matrix random_orthogonal(std::size_t n, std::uint64_t seed);

// Extends the k orthonormal columns of `partial` (m×k, k ≤ m) to an m×m
// orthogonal matrix whose first k columns equal the input.
Matrix complete_orthonormal(const Matrix& partial);

}  // namespace tenspec
