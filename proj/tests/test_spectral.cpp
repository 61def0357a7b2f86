#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "tenspec/error.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/random.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/svd.hpp"

using namespace tenspec;
using testing::diag21;

TEST_SUITE("spectral") {

TEST_CASE("params validation") {
    CHECK_THROWS_AS(SchattenParams(0.5, 1, 1), DomainError);
    CHECK_THROWS_AS(SchattenParams(1, 0.9, 1), DomainError);
    CHECK_THROWS_AS(SchattenParams(1, 1, 0), DomainError);
    CHECK_THROWS_AS(SchattenParams(INFINITY, 1, 1), DomainError);
    CHECK(SchattenParams::nuclear(4) == SchattenParams(1, 1, 0.25));
}

TEST_CASE("lp_norm") {
    CHECK(lp_norm({3, 4}, 2) == doctest::Approx(5.0));
    CHECK(lp_norm({3, -4}, 1) == 7.0);
    CHECK(lp_norm({3, -4}, INFINITY) == 4.0);
    CHECK(lp_norm({0, 0}, 3) == 0.0);
    // No overflow for large entries.
    CHECK(lp_norm({1e200, 1e200}, 2) == doctest::Approx(std::sqrt(2.0) * 1e200));
}

TEST_CASE("hosvd of a diagonal tensor") {
    const Hosvd h = hosvd(diag21());
    CHECK(h.core == diag21());
    for (const auto& u : h.factors) CHECK(u == Matrix::identity(2));
}

TEST_CASE("hosvd of the zero tensor") {
    const Hosvd h = hosvd(DenseTensor(Shape{2, 3, 2}));
    CHECK(frobenius(h.core) == 0.0);
    for (const auto& u : h.factors) CHECK(is_orthogonal(u, 1e-12));
    for (double off : core_orthogonality_report(h)) CHECK(off == 0.0);
}

TEST_CASE("hosvd invariants on a random 3x4x5 tensor") {
    const DenseTensor x = random_gaussian(Shape{3, 4, 5}, 17);
    const Hosvd h = hosvd(x);
    const double nx = frobenius(x);
    CHECK(frobenius(h.reconstruct() - x) <= 1e-10 * nx);
    for (const auto& u : h.factors) CHECK(is_orthogonal(u, 1e-12));
    for (double off : core_orthogonality_report(h)) CHECK(off <= 1e-10 * nx * nx);
    // Row norms of each core unfolding are the mode spectra.
    for (std::size_t d = 1; d <= 3; ++d) {
        const Matrix c = matricize(h.core, d);
        const Matrix gram = c * c.transpose();
        const auto s = mode_spectrum(x, d);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::sqrt(gram(i, i)) == doctest::Approx(s[i]).epsilon(1e-10));
    }
}

TEST_CASE("core report detects injected off-diagonal mass") {
    Hosvd h = hosvd(random_gaussian(Shape{3, 3, 3}, 2));
    std::vector<double> data(h.core.data().begin(), h.core.data().end());
    data[1] += 0.5;
    h.core = DenseTensor(h.core.shape(), data);
    const auto report = core_orthogonality_report(h);
    CHECK(*std::max_element(report.begin(), report.end()) > 1e-3);
}

TEST_CASE("mode spectra") {
    for (std::size_t d = 1; d <= 3; ++d) CHECK(mode_spectrum(diag21(), d) == std::vector<double>{2.0, 1.0});
    CHECK(mode_spectrum(DenseTensor(Shape{3, 2, 2}), 1) == std::vector<double>(3, 0.0));
    CHECK_THROWS_AS(mode_spectrum(diag21(), 0), ShapeError);

    const std::vector<double> a{1, 2}, b{3, 0, 4}, c{2, 2};
    const DenseTensor r1 = outer({a, b, c});
    const double prod = std::sqrt(5.0) * 5.0 * std::sqrt(8.0);
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto s = mode_spectrum(r1, d);
        CHECK(s[0] == doctest::Approx(prod).epsilon(1e-12));
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= 1e-12 * prod);
    }

    // Zero padding when n_d exceeds the other modes' product.
    const auto padded = mode_spectrum(random_gaussian(Shape{5, 2}, 1), 1);
    CHECK(padded.size() == 5);
    CHECK(padded[2] == 0.0);
    CHECK(padded[4] == 0.0);
}

TEST_CASE("spectra of symmetric and odeco tensors agree across modes") {
    const DenseTensor s = symmetrize(random_gaussian(Shape{3, 3, 3}, 5));
    const auto ss = all_mode_spectra(s);
    CHECK(ss.order() == 3);
    for (std::size_t d = 1; d < 3; ++d) testing::check_close(ss[d], ss[0], 1e-10 * frobenius(s));

    const DenseTensor o = to_dense(random_odeco(Shape{3, 3, 3}, 2, 6));
    const auto so = all_mode_spectra(o);
    for (std::size_t d = 1; d < 3; ++d) testing::check_close(so[d], so[0], 1e-10 * frobenius(o));
}

TEST_CASE("spectra have the Frobenius norm") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 4}, 3);
    for (const auto& s : all_mode_spectra(x).per_mode) CHECK(lp_norm(s, 2) == doctest::Approx(frobenius(x)).epsilon(1e-10));
}

TEST_CASE("combined spectrum") {
    const auto e = combined_spectrum(diag21());
    for (const auto& v : e.per_mode) testing::check_close(v, std::vector<double>{2 / std::sqrt(3.0), 1 / std::sqrt(3.0)}, 1e-15);
    for (const auto& v : combined_spectrum(DenseTensor(Shape{2, 2})).per_mode) CHECK(v == std::vector<double>{0, 0});
    const DenseTensor x = random_gaussian(Shape{2, 3, 2}, 4);
    const auto a = combined_spectrum(x), b = combined_spectrum(2.5 * x);
    for (std::size_t d = 0; d < 3; ++d) {
        std::vector<double> scaled(a.per_mode[d]);
        for (double& v : scaled) v *= 2.5;
        testing::check_close(b.per_mode[d], scaled, 1e-12);
    }
}

TEST_CASE("Schatten norms") {
    CHECK(schatten_norm(diag21(), SchattenParams(1, 1, 1.0 / 3)) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(nuclear_norm(diag21()) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(schatten_norm(diag21(), SchattenParams(2, 2, 1)) == doctest::Approx(std::sqrt(15.0)).epsilon(1e-15));
    CHECK(schatten_norm(diag21(), SchattenParams(2, 2, 1)) == doctest::Approx(3.872983346207417).epsilon(1e-15));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Shape shape = seed % 2 ? Shape{2, 3, 4} : Shape{3, 2, 2, 2};
        const DenseTensor x = random_gaussian(shape, seed);
        const double expect = std::sqrt(static_cast<double>(shape.order())) * frobenius(x);
        CHECK(std::abs(schatten_norm(x, SchattenParams(2, 2, 1)) - expect) <= 1e-12 * expect);
        // Absolute homogeneity.
        const SchattenParams p(3, 2, 0.7);
        CHECK(schatten_norm(-2.0 * x, p) == doctest::Approx(2.0 * schatten_norm(x, p)).epsilon(1e-13));
    }
    CHECK(schatten_norm(DenseTensor(Shape{2, 2}), SchattenParams(3, 2, 1)) == 0.0);
}

TEST_CASE("nuclear norm") {
    const auto rep = random_odeco(Shape{3, 3, 3}, 3, 12);
    const double sum = std::accumulate(rep.alphas().begin(), rep.alphas().end(), 0.0);
    CHECK(nuclear_norm(to_dense(rep)) == doctest::Approx(sum).epsilon(1e-10));
    CHECK(nuclear_norm(DenseTensor(Shape{3, 3})) == 0.0);

    const Matrix m = random_gaussian_matrix(3, 4, 2);
    const auto s = singular_values(m);
    CHECK(nuclear_norm(DenseTensor::from_matrix(m)) ==
          doctest::Approx(std::accumulate(s.begin(), s.end(), 0.0)).epsilon(1e-12));
}

TEST_CASE("schatten_from_spectra matches the tensor path") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 2}, 9);
    const SchattenParams p(1.5, 2.5, 0.3);
    CHECK(schatten_from_spectra(all_mode_spectra(x), p) == schatten_norm(x, p));
}

}
