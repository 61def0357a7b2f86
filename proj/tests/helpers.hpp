#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"
#include "tenspec/tensor.hpp"

namespace testing {

inline std::vector<double> unit(std::size_t i, std::size_t n) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    return e;
}

// The 2×2×2 diagonal tensor with diagonal (2, 1).
inline tenspec::DenseTensor diag21() {
    const std::vector<double> d{2.0, 1.0};
    return tenspec::DenseTensor::diagonal(d, 3);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline void check_close(std::span<const double> a, std::span<const double> b, double tol) {
    CHECK(max_abs_diff(a, b) <= tol);
}

inline void check_close(std::span<const double> a, const std::vector<double>& b, double tol) {
    check_close(a, std::span<const double>(b), tol);
}

}  // namespace testing
