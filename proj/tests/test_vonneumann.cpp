#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "tenspec/error.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/random.hpp"
#include "tenspec/svd.hpp"
#include "tenspec/vonneumann.hpp"

using namespace tenspec;
using testing::unit;

namespace {

DenseTensor diag(std::vector<double> d) { return DenseTensor::diagonal(d, 3); }

}  // namespace

TEST_SUITE("vonneumann") {

TEST_CASE("identical tensors attain equality") {
    const DenseTensor x = random_gaussian(Shape{2, 3, 2}, 1);
    const VnReport r = vn_report(x, x, 1e-10);
    CHECK(r.equality);
    for (double g : r.per_mode_gap) CHECK(std::abs(g) <= 1e-12 * r.scale);
    CHECK(r.inner == doctest::Approx(frobenius(x) * frobenius(x)));
}

TEST_CASE("sorted spectra ignore alignment") {
    const DenseTensor x = outer({unit(0, 2), unit(0, 2), unit(0, 2)});
    const DenseTensor y = outer({unit(1, 2), unit(1, 2), unit(1, 2)});
    const VnReport r = vn_report(x, y, 1e-10);
    CHECK(r.inner == 0.0);
    CHECK(r.per_mode_bound == std::vector<double>{1, 1, 1});
    CHECK(r.per_mode_gap == std::vector<double>{1, 1, 1});
    CHECK_FALSE(r.equality);
}

TEST_CASE("inequality holds on random pairs") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Shape shape = seed % 2 ? Shape{3, 2, 4} : Shape{2, 2, 2, 3};
        const VnReport r = vn_report(random_gaussian(shape, 2 * seed), random_gaussian(shape, 2 * seed + 1), 1e-10);
        for (double g : r.per_mode_gap) CHECK(g >= -1e-10 * r.scale);
    }
    CHECK_THROWS_AS(vn_report(DenseTensor(Shape{2, 2}), DenseTensor(Shape{2, 3}), 1e-10), ShapeError);
}

TEST_CASE("block partition: singleton diagonal blocks") {
    const DenseTensor d = diag({2, 1});
    const BlockPartition p = find_block_partition(d, d, 1e-12);
    CHECK(p.block_count == 2);
    for (const auto& ids : p.block_of) CHECK(ids == std::vector<std::size_t>{0, 1});
    CHECK(p.indices(1, 2) == std::vector<std::size_t>{1});
}

TEST_CASE("block partition: dense input is one block") {
    DenseTensor x = random_gaussian(Shape{3, 2, 2}, 3);
    const BlockPartition p = find_block_partition(x, x, 1e-12);
    CHECK(p.block_count == 1);
    for (const auto& ids : p.block_of) CHECK(std::all_of(ids.begin(), ids.end(), [](std::size_t b) { return b == 0; }));
}

TEST_CASE("block partition: residual block") {
    // CY lives on block 1 only; block 2 is held by CX alone.
    const BlockPartition p = find_block_partition(diag({2, 1}), diag({3, 0}), 1e-12);
    CHECK(p.block_count == 2);
    // A 3×3×3 diagonal with the last entry zero in both leaves index 2 untouched.
    const BlockPartition q = find_block_partition(diag({2, 1, 0}), diag({1, 1, 0}), 1e-12);
    CHECK(q.block_count == 3);
    for (const auto& ids : q.block_of) CHECK(ids[2] == 2);
}

TEST_CASE("equality structure") {
    const DenseTensor x = random_gaussian(Shape{2, 2, 2}, 4);
    const BlockPartition one = find_block_partition(x, x, 1e-12);
    const EqualityStructure s = verify_equality_structure(x, 3.0 * x, one, 1e-10);
    CHECK(s.holds);
    REQUIRE(s.constants.size() == 1);
    CHECK(s.constants[0] == doctest::Approx(3.0));

    const DenseTensor cx = diag({2, 1}), cy = diag({4, 5});
    const EqualityStructure t = verify_equality_structure(cx, cy, find_block_partition(cx, cy, 1e-12), 1e-10);
    CHECK(t.holds);
    REQUIRE(t.constants.size() == 2);
    CHECK(t.constants[0] == doctest::Approx(2.0));
    CHECK(t.constants[1] == doctest::Approx(5.0));

    BlockPartition joint;
    joint.block_count = 1;
    joint.block_of = {{0, 0}, {0, 0}, {0, 0}};
    CHECK_FALSE(verify_equality_structure(diag({1, 1}), diag({1, 2}), joint, 1e-10).holds);

    CHECK_FALSE(verify_equality_structure(x, -1.0 * x, one, 1e-10).holds);
}

TEST_CASE("equality via structure: shared frames") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_odeco(Shape{3, 3, 3}, 3, seed);
        const auto y = make_odeco({3.0, 2.0, 0.5}, x.factors(), x.shape());
        const auto frames = odeco_hosvd(x).factors;
        const StructureCheck c = check_equality_via_structure(to_dense(x), to_dense(y), frames, 1e-10);
        CHECK(c.structure_holds);
        CHECK(c.vn_equality);
        CHECK(c.holds);
        CHECK(c.partition.block_count == 3);
    }
}

TEST_CASE("equality via structure: X = Y") {
    const auto x = random_odeco(Shape{2, 3, 2}, 2, 5);
    const DenseTensor dx = to_dense(x);
    const StructureCheck c = check_equality_via_structure(dx, dx, odeco_hosvd(x).factors, 1e-10);
    CHECK(c.holds);
    // Two weighted blocks plus the residual block for the unused mode-2 index.
    REQUIRE(c.partition.block_count == 3);
    CHECK(c.structure.constants[0] == doctest::Approx(1.0));
    CHECK(c.structure.constants[1] == doctest::Approx(1.0));
}

TEST_CASE("equality via structure: misaligned frame") {
    const auto x = random_odeco(Shape{3, 3, 3}, 3, 6);
    const DenseTensor dx = to_dense(x);
    const std::vector<Matrix> rot{random_orthogonal(3, 1), random_orthogonal(3, 2), random_orthogonal(3, 3)};
    const DenseTensor dy = multi_mode_mul(dx, rot);
    const StructureCheck c = check_equality_via_structure(dx, dy, odeco_hosvd(x).factors, 1e-8);
    CHECK_FALSE(c.vn_equality);
    CHECK_FALSE(c.holds);
}

TEST_CASE("ordering matters for equality") {
    // Same frames, but the weights pair the large entry of X with the small
    // entry of Y: block structure holds, the inner product is below the bound.
    const DenseTensor x = diag({2, 1}), y = diag({1, 2});
    const std::vector<Matrix> ids(3, Matrix::identity(2));
    const StructureCheck c = check_equality_via_structure(x, y, ids, 1e-10);
    CHECK(c.structure_holds);
    CHECK_FALSE(c.vn_equality);
    CHECK_FALSE(c.holds);
}

TEST_CASE("frame validation") {
    const DenseTensor x = diag({1, 1});
    CHECK_THROWS_AS(check_equality_via_structure(x, x, std::vector<Matrix>(2, Matrix::identity(2)), 1e-10), ShapeError);
    const std::vector<Matrix> bad{Matrix(2, 2, {1, 1, 0, 1}), Matrix::identity(2), Matrix::identity(2)};
    CHECK_THROWS_AS(check_equality_via_structure(x, x, bad, 1e-10), DomainError);
}

}
