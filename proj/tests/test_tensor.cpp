#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "tenspec/error.hpp"
#include "tenspec/random.hpp"
#include "tenspec/svd.hpp"
#include "tenspec/tensor.hpp"

using namespace tenspec;
using testing::unit;

TEST_SUITE("tensor-core") {

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(Shape({3}), ShapeError);
    CHECK_THROWS_AS(Shape({2, 0}), ShapeError);
    const Shape s{2, 3, 4};
    CHECK(s.order() == 3);
    CHECK(s.size() == 24);
    CHECK(s.dim(2) == 3);
    CHECK_THROWS_AS(s.dim(0), ShapeError);
    CHECK_THROWS_AS(s.dim(4), ShapeError);
    CHECK_FALSE(s.is_cubic());
    CHECK(Shape({3, 3, 3}).is_cubic());
}

TEST_CASE("construction rejects bad data") {
    CHECK_THROWS_AS(DenseTensor(Shape{2, 2}, {1, 2, 3}), ShapeError);
    CHECK_THROWS_AS(DenseTensor(Shape{2, 2}, {1, 2, 3, NAN}), DomainError);
    CHECK_THROWS_AS(DenseTensor(Shape{2, 2}, {1, 2, 3, INFINITY}), DomainError);
}

TEST_CASE("row-major layout") {
    std::vector<double> data(24);
    std::iota(data.begin(), data.end(), 0.0);
    const DenseTensor x(Shape{2, 3, 4}, data);
    // offset of (i1, i2, i3) = 12 i1 + 4 i2 + i3
    CHECK(x.at({1, 2, 3}) == 23.0);
    CHECK(x.at({1, 0, 2}) == 14.0);
    CHECK(x.at({0, 1, 0}) == 4.0);
}

TEST_CASE("inner product") {
    const DenseTensor e11 = outer({unit(0, 2), unit(0, 2)});
    CHECK(inner(e11, e11) == 1.0);
    const DenseTensor e111 = outer({unit(0, 2), unit(0, 2), unit(0, 2)});
    const DenseTensor e211 = outer({unit(1, 2), unit(0, 2), unit(0, 2)});
    CHECK(inner(e111, e211) == 0.0);
    const DenseTensor ones(Shape{2, 2, 2}, std::vector<double>(8, 1.0));
    CHECK(inner(ones, ones) == 8.0);
    CHECK_THROWS_AS(inner(ones, e11), ShapeError);
}

TEST_CASE("frobenius") {
    CHECK(frobenius(DenseTensor(Shape{3, 3, 3})) == 0.0);
    const DenseTensor ones(Shape{2, 2, 2}, std::vector<double>(8, 1.0));
    CHECK(frobenius(ones) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(frobenius(testing::diag21()) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("matricize: hand-enumerated forward cyclic ordering") {
    const Matrix m(2, 2, {1, 2, 3, 4});
    CHECK(matricize(DenseTensor::from_matrix(m), 1) == m);
    CHECK(matricize(DenseTensor::from_matrix(m), 2) == m.transpose());

    const DenseTensor e211 = outer({unit(1, 2), unit(0, 2), unit(0, 2)});
    const Matrix u = matricize(e211, 1);
    REQUIRE(u.rows() == 2);
    REQUIRE(u.cols() == 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(u(i, j) == (i == 1 && j == 0 ? 1.0 : 0.0));

    // 2×3×4, mode 2: columns enumerate (i3, i1) with i3 fastest, so entry
    // (i1, i2, i3) lands in row i2, column i3 + 4 i1.
    std::vector<double> data(24);
    std::iota(data.begin(), data.end(), 0.0);
    const DenseTensor x(Shape{2, 3, 4}, data);
    const Matrix x2 = matricize(x, 2);
    REQUIRE(x2.rows() == 3);
    REQUIRE(x2.cols() == 8);
    CHECK(x2(2, 3 + 4 * 1) == x.at({1, 2, 3}));
    CHECK(x2(1, 2) == x.at({0, 1, 2}));
    // mode 3: columns enumerate (i1, i2) with i1 fastest.
    const Matrix x3 = matricize(x, 3);
    CHECK(x3(3, 1 + 2 * 2) == x.at({1, 2, 3}));
    // mode 1: columns enumerate (i2, i3) with i2 fastest.
    const Matrix x1 = matricize(x, 1);
    CHECK(x1(1, 2 + 3 * 3) == x.at({1, 2, 3}));

    CHECK_THROWS_AS(matricize(x, 0), ShapeError);
    CHECK_THROWS_AS(matricize(x, 4), ShapeError);
}

TEST_CASE("matricize preserves entries") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 4}, 7);
    for (std::size_t d = 1; d <= 3; ++d) {
        CHECK(frobenius(matricize(x, d)) == doctest::Approx(frobenius(x)).epsilon(1e-14));
        CHECK(tensorize(matricize(x, d), d, x.shape()) == x);
    }
}

TEST_CASE("tensorize is the adjoint of matricize") {
    CHECK(tensorize(Matrix(3, 8), 2, Shape{2, 3, 4}) == DenseTensor(Shape{2, 3, 4}));
    CHECK_THROWS_AS(tensorize(Matrix(3, 7), 2, Shape{2, 3, 4}), ShapeError);
    for (std::uint64_t t = 0; t < 100; ++t) {
        const Shape shape{2, 3, 4};
        const std::size_t d = 1 + t % 3;
        const DenseTensor x = random_gaussian(shape, 2 * t);
        const Matrix m = random_gaussian_matrix(shape.dim(d), shape.size() / shape.dim(d), 2 * t + 1);
        const double lhs = inner(matricize(x, d), m);
        const double rhs = inner(x, tensorize(m, d, shape));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * frobenius(x) * frobenius(m));
    }
}

TEST_CASE("mode multiplication") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 4}, 3);
    for (std::size_t d = 1; d <= 3; ++d) CHECK(mode_mul(x, d, Matrix::identity(x.shape().dim(d))) == x);

    const Matrix swap(2, 2, {0, 1, 1, 0});
    CHECK(mode_mul(outer({unit(0, 2), unit(0, 2)}), 1, swap) == outer({unit(1, 2), unit(0, 2)}));

    for (std::size_t d = 1; d <= 3; ++d) {
        const Matrix m = random_gaussian_matrix(5, x.shape().dim(d), 10 + d);
        const DenseTensor y = mode_mul(x, d, m);
        CHECK(y.shape() == x.shape().with_dim(d, 5));
        testing::check_close(matricize(y, d).data(), (m * matricize(x, d)).data(), 1e-12);
    }
    CHECK_THROWS_AS(mode_mul(x, 1, Matrix(2, 3)), ShapeError);
}

TEST_CASE("multi-mode multiplication") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 4}, 4);
    const std::vector<Matrix> ids{Matrix::identity(2), Matrix::identity(3), Matrix::identity(4)};
    CHECK(multi_mode_mul(x, ids) == x);

    const std::vector<Matrix> fs{random_gaussian_matrix(3, 2, 1), random_gaussian_matrix(2, 3, 2),
                                 random_gaussian_matrix(4, 4, 3)};
    DenseTensor reversed = x;
    for (std::size_t d = 3; d >= 1; --d) reversed = mode_mul(reversed, d, fs[d - 1]);
    testing::check_close(multi_mode_mul(x, fs).data(), reversed.data(), 1e-12);

    const std::vector<Matrix> qs{random_orthogonal(2, 5), random_orthogonal(3, 6), random_orthogonal(4, 7)};
    CHECK(frobenius(multi_mode_mul(x, qs)) == doctest::Approx(frobenius(x)).epsilon(1e-12));

    CHECK_THROWS_AS(multi_mode_mul(x, std::vector<Matrix>(ids.begin(), ids.begin() + 2)), ShapeError);
}

TEST_CASE("outer product") {
    const DenseTensor e = outer({{1, 0}, {1, 0}, {1, 0}});
    CHECK(e.at({0, 0, 0}) == 1.0);
    CHECK(frobenius(e) == 1.0);
    CHECK(outer({{1, 2}, {1, 0}}).to_matrix() == Matrix(2, 2, {1, 0, 2, 0}));

    Rng rng(9);
    const auto a = rng.gaussian_vector(3), b = rng.gaussian_vector(2), c = rng.gaussian_vector(4);
    auto norm = [](const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); };
    CHECK(frobenius(outer({a, b, c})) == doctest::Approx(norm(a) * norm(b) * norm(c)).epsilon(1e-12));
    CHECK_THROWS(outer({{1, 2}}));
    CHECK_THROWS(outer({{1, 2}, {}}));
}

TEST_CASE("symmetry") {
    CHECK(is_symmetric(testing::diag21(), 0.0));
    CHECK_FALSE(is_symmetric(DenseTensor::from_matrix(Matrix(2, 2, {0, 2, 0, 0})), 1e-9));
    CHECK_THROWS_AS(is_symmetric(DenseTensor(Shape{2, 3}), 1e-9), ShapeError);

    CHECK(symmetrize(DenseTensor::from_matrix(Matrix(2, 2, {0, 2, 0, 0}))).to_matrix() == Matrix(2, 2, {0, 1, 1, 0}));
    const DenseTensor s = symmetrize(random_gaussian(Shape{3, 3, 3}, 11));
    CHECK(is_symmetric(s, 1e-14));
    CHECK(symmetrize(testing::diag21()) == testing::diag21());
    testing::check_close(symmetrize(s).data(), s.data(), 1e-14 * frobenius(s));
    CHECK_THROWS_AS(symmetrize(DenseTensor(Shape{2, 3})), ShapeError);
}

}
