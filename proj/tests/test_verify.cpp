#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tenspec/random.hpp"
#include "tenspec/svd.hpp"
#include "tenspec/verify.hpp"

using namespace tenspec;

TEST_SUITE("verify") {

TEST_CASE("grid oracle on known maxima") {
    // max over the unit ℓ_{p*} sphere of ⟨v, s⟩ is ‖s‖_p.
    CHECK(verify::grid_search_dual_pairing({3, 4}, 2, 1e-3) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(verify::grid_search_dual_pairing({3, 4}, 1, 1e-3) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(verify::grid_search_dual_pairing({1, 2, 2}, 2, 1e-2) == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(verify::grid_search_dual_pairing({2, 1}, 3, 1e-3) == doctest::Approx(std::cbrt(9.0)).epsilon(1e-6));
    CHECK_THROWS(verify::grid_search_dual_pairing({1, 2, 3, 4}, 2, 1e-2));
}

TEST_CASE("inverse and polar factor") {
    const Matrix a(2, 2, {4, 7, 2, 6});
    testing::check_close((a * verify::inverse(a)).data(), Matrix::identity(2).data(), 1e-14);
    CHECK_THROWS(verify::inverse(Matrix(2, 2, {1, 2, 2, 4})));

    // Polar factor of a rotation times an SPD matrix is the rotation.
    const double c = std::cos(0.4), s = std::sin(0.4);
    const Matrix q(2, 2, {c, -s, s, c});
    const Matrix p(2, 2, {3, 1, 1, 2});
    testing::check_close(verify::polar_factor(q * p).data(), q.data(), 1e-14);

    const Matrix m = random_gaussian_matrix(4, 4, 3);
    const Matrix u = verify::polar_factor(m);
    CHECK(is_orthogonal(u, 1e-13));
    const Matrix h = u.transpose() * m;
    CHECK(frobenius(h - h.transpose()) <= 1e-12 * frobenius(m));
}

TEST_CASE("criteria are deterministic per seed") {
    const verify::Config config{3, 0.02};
    for (int id : {1, 5, 6, 10}) {
        const auto a = verify::to_json(verify::run_criterion(id, config));
        const auto b = verify::to_json(verify::run_criterion(id, config));
        CHECK(a == b);
    }
    CHECK_THROWS(verify::run_criterion(11, config));
}

TEST_CASE("report layout") {
    const verify::Config config{0, 0.01};
    const auto results = std::vector<verify::CriterionResult>{verify::run_criterion(1, config)};
    const auto report = verify::report_json(results, config);
    CHECK(report["passed"] == 1);
    CHECK(report["failed"] == 0);
    CHECK(report["suites"][0]["id"] == 1);
    CHECK(report["suites"][0]["checks"].size() == 2);
}

}
