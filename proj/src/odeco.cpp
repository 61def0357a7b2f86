#include "tenspec/odeco.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tenspec/random.hpp"
#include "tenspec/svd.hpp"

namespace tenspec {

namespace {

constexpr double kValidationTol = 1e-10;

void require_rank_fits(const Shape& shape, std::size_t rank) {
    const auto& dims = shape.dims();
    const std::size_t smallest = *std::min_element(dims.begin(), dims.end());
    if (rank > smallest) {
        throw OdecoError(OdecoError::Kind::RankTooLarge,
                         "odeco rank " + std::to_string(rank) + " exceeds smallest mode size " +
                             std::to_string(smallest));
    }
}

Matrix leading_columns(const Matrix& q, std::size_t r) {
    Matrix out(q.rows(), r);
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < r; ++j) out(i, j) = q(i, j);
    return out;
}

std::vector<double> random_weights(std::size_t rank, Rng& rng) {
    std::vector<double> alphas(rank);
    for (double& a : alphas) a = std::abs(rng.gaussian()) + 0.1;
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    return alphas;
}

}  // namespace

OdecoRep make_odeco(std::vector<double> alphas, std::vector<Matrix> factors, const Shape& shape) {
    if (factors.size() != shape.order()) {
        throw OdecoError(OdecoError::Kind::ShapeMismatch, "odeco: expected " + std::to_string(shape.order()) +
                                                              " factors, got " + std::to_string(factors.size()));
    }
    for (std::size_t d = 0; d < factors.size(); ++d) {
        if (factors[d].rows() != shape.dims()[d] || factors[d].cols() != alphas.size()) {
            throw OdecoError(OdecoError::Kind::ShapeMismatch,
                             "odeco: factor " + std::to_string(d + 1) + " must be " + std::to_string(shape.dims()[d]) +
                                 "x" + std::to_string(alphas.size()));
        }
    }
    for (double a : alphas) {
        if (!std::isfinite(a) || a < 0.0) {
            throw OdecoError(OdecoError::Kind::NonPositiveWeight, "odeco: weights must be positive");
        }
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (alphas[i] > 0.0) keep.push_back(i);
    if (keep.empty()) throw OdecoError(OdecoError::Kind::NonPositiveWeight, "odeco: no positive weight");
    std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return alphas[a] > alphas[b]; });
    require_rank_fits(shape, keep.size());

    OdecoRep rep;
    rep.shape_ = shape;
    for (std::size_t i : keep) rep.alphas_.push_back(alphas[i]);
    for (std::size_t d = 0; d < factors.size(); ++d) {
        Matrix f(factors[d].rows(), keep.size());
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) f(i, j) = factors[d](i, keep[j]);
        const Matrix gram = f.transpose() * f;
        if (frobenius(gram - Matrix::identity(keep.size())) > kValidationTol) {
            throw OdecoError(OdecoError::Kind::NonOrthonormal,
                             "odeco: columns of factor " + std::to_string(d + 1) + " are not orthonormal");
        }
        rep.factors_.push_back(std::move(f));
    }
    return rep;
}

DenseTensor to_dense(const OdecoRep& rep) {
    std::vector<double> sum(rep.shape().size(), 0.0);
    for (std::size_t i = 0; i < rep.rank(); ++i) {
        std::vector<std::vector<double>> vectors;
        for (const auto& f : rep.factors()) vectors.push_back(f.column(i));
        const DenseTensor term = outer(vectors);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += rep.alphas()[i] * term[k];
    }
    return DenseTensor(rep.shape(), std::move(sum));
}

Hosvd odeco_hosvd(const OdecoRep& rep) {
    Hosvd h;
    h.core = DenseTensor(rep.shape());
    std::vector<double> core(rep.shape().size(), 0.0);
    std::vector<std::size_t> index(rep.shape().order());
    for (std::size_t i = 0; i < rep.rank(); ++i) {
        std::fill(index.begin(), index.end(), i);
        core[h.core.offset(index)] = rep.alphas()[i];
    }
    h.core = DenseTensor(rep.shape(), std::move(core));
    for (const auto& f : rep.factors()) h.factors.push_back(complete_orthonormal(f));
    return h;
}

OdecoRep random_odeco(const Shape& shape, std::size_t rank, std::uint64_t seed) {
    require_rank_fits(shape, rank);
    Rng rng(seed);
    auto alphas = random_weights(rank, rng);
    std::vector<Matrix> factors;
    for (std::size_t d = 0; d < shape.order(); ++d) {
        factors.push_back(leading_columns(random_orthogonal(shape.dims()[d], derive_seed(seed, d)), rank));
    }
    return make_odeco(std::move(alphas), std::move(factors), shape);
}

OdecoRep random_symmetric_odeco(std::size_t n, std::size_t order, std::size_t rank, std::uint64_t seed) {
    const Shape shape(std::vector<std::size_t>(order, n));
    require_rank_fits(shape, rank);
    Rng rng(seed);
    auto alphas = random_weights(rank, rng);
    const Matrix shared = leading_columns(random_orthogonal(n, derive_seed(seed, 0)), rank);
    return make_odeco(std::move(alphas), std::vector<Matrix>(order, shared), shape);
}

}  // namespace tenspec
