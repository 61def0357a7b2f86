#include "tenspec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tenspec/error.hpp"
#include "tenspec/random.hpp"

namespace tenspec {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void rotate(double* a, double* b, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a[i], y = b[i];
        a[i] = c * x - s * y;
        b[i] = s * x + c * y;
    }
}

// Hestenes one-sided Jacobi on the columns of a column-major m×n matrix.
// On return the columns are mutually orthogonal; if v is given (n×n,
// column-major, initially identity) it accumulates the right rotations.
void orthogonalize_columns(std::vector<double>& a, std::size_t m, std::size_t n, std::vector<double>* v) {
    const double tol = static_cast<double>(std::max<std::size_t>(m, 1)) * kEps;
    std::vector<double> norm2(n);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) norm2[j] = dot(&a[j * m], &a[j * m], m);
        // Columns below the numerical-zero cutoff hold only rounding noise,
        // which the relative test would chase indefinitely.
        const double total = std::accumulate(norm2.begin(), norm2.end(), 0.0);
        const double negligible = tol * tol * total;
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double alpha = norm2[i], beta = norm2[j];
                if (alpha <= negligible || beta <= negligible) continue;
                const double gamma = dot(&a[i * m], &a[j * m], m);
                if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(&a[i * m], &a[j * m], m, c, s);
                if (v != nullptr) rotate(&(*v)[i * n], &(*v)[j * n], n, c, s);
                norm2[i] = alpha - t * gamma;
                norm2[j] = beta + t * gamma;
            }
        }
        if (!rotated) return;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ni = std::sqrt(dot(&a[i * m], &a[i * m], m));
            const double nj = std::sqrt(dot(&a[j * m], &a[j * m], m));
            if (ni > 0.0 && nj > 0.0) residual = std::max(residual, std::abs(dot(&a[i * m], &a[j * m], m)) / (ni * nj));
        }
    }
    throw ConvergenceError("Jacobi SVD did not converge in 60 sweeps", residual);
}

// Column-major copy of the tall orientation: M itself when rows >= cols,
// otherwise Mᵀ (whose column-major layout is M's row-major data).
std::vector<double> tall_columns(const Matrix& m, bool& transposed) {
    transposed = m.rows() < m.cols();
    if (transposed) return std::vector<double>(m.data().begin(), m.data().end());
    std::vector<double> a(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[j * m.rows() + i] = m(i, j);
    return a;
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

}  // namespace

Matrix complete_orthonormal(const Matrix& partial) {
    const std::size_t m = partial.rows();
    const std::size_t k = partial.cols();
    if (k > m) throw ShapeError("complete_orthonormal: more columns than rows");

    // Householder QR of the m×k input, column-major working copy.
    std::vector<double> a(m * k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) a[j * m + i] = partial(i, j);

    std::vector<std::vector<double>> reflectors(k);
    std::vector<double> rdiag(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double* col = &a[j * m];
        double norm = 0.0;
        for (std::size_t i = j; i < m; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = col[j] >= 0.0 ? -norm : norm;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = j; i < m; ++i) v[i] = col[i];
        v[j] -= alpha;
        const double vnorm2 = dot(v.data(), v.data(), m);
        if (vnorm2 == 0.0) {
            rdiag[j] = alpha;
            continue;
        }
        for (std::size_t c = j; c < k; ++c) {
            double* x = &a[c * m];
            const double f = 2.0 * dot(v.data(), x, m) / vnorm2;
            for (std::size_t i = j; i < m; ++i) x[i] -= f * v[i];
        }
        for (double& x : v) x /= std::sqrt(vnorm2);
        reflectors[j] = std::move(v);
        rdiag[j] = alpha;
    }

    // Q = H_0 H_1 ⋯ H_{k-1}, applied to the identity from the right end.
    Matrix q = Matrix::identity(m);
    for (std::size_t j = k; j-- > 0;) {
        const auto& v = reflectors[j];
        if (v.empty()) continue;
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < m; ++i) s += v[i] * q(i, c);
            for (std::size_t i = j; i < m; ++i) q(i, c) -= 2.0 * s * v[i];
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (rdiag[j] < 0.0) {
            for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
        }
    }
    return q;
}

SvdResult svd(const Matrix& m) {
    bool transposed = false;
    std::vector<double> a = tall_columns(m, transposed);
    const std::size_t rows = transposed ? m.cols() : m.rows();
    const std::size_t cols = transposed ? m.rows() : m.cols();

    std::vector<double> v(cols * cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) v[j * cols + j] = 1.0;
    orthogonalize_columns(a, rows, cols, &v);

    std::vector<double> sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) sigma[j] = std::sqrt(dot(&a[j * rows], &a[j * rows], rows));
    const auto order = descending_order(sigma);
    const double sigma_max = cols > 0 ? sigma[order.front()] : 0.0;
    const double cutoff = sigma_max * kEps * static_cast<double>(std::max(rows, cols));

    // Normalized columns of the tall factor, completed to a full basis.
    std::size_t kept = 0;
    while (kept < cols && sigma[order[kept]] > cutoff && sigma[order[kept]] > 0.0) ++kept;
    Matrix partial(rows, kept);
    for (std::size_t t = 0; t < kept; ++t) {
        const std::size_t j = order[t];
        for (std::size_t i = 0; i < rows; ++i) partial(i, t) = a[j * rows + i] / sigma[j];
    }
    Matrix tall_left = complete_orthonormal(partial);

    Matrix right(cols, cols);
    for (std::size_t t = 0; t < cols; ++t)
        for (std::size_t i = 0; i < cols; ++i) right(i, t) = v[order[t] * cols + i];

    SvdResult result;
    result.singular_values.resize(cols);
    for (std::size_t t = 0; t < cols; ++t) result.singular_values[t] = sigma[order[t]];
    if (transposed) {
        result.U = std::move(right);
        result.Vt = tall_left.transpose();
    } else {
        result.U = std::move(tall_left);
        result.Vt = right.transpose();
    }

    // First nonzero entry of every left singular vector is made nonnegative.
    Matrix& u = result.U;
    Matrix& vt = result.Vt;
    for (std::size_t j = 0; j < u.cols(); ++j) {
        std::size_t i = 0;
        while (i < u.rows() && std::abs(u(i, j)) <= 1e-12) ++i;
        if (i == u.rows() || u(i, j) >= 0.0) continue;
        for (std::size_t r = 0; r < u.rows(); ++r) u(r, j) = -u(r, j);
        if (j < vt.rows()) {
            for (std::size_t c = 0; c < vt.cols(); ++c) vt(j, c) = -vt(j, c);
        }
    }
    return result;
}

std::vector<double> singular_values(const Matrix& m) {
    bool transposed = false;
    std::vector<double> a = tall_columns(m, transposed);
    const std::size_t rows = transposed ? m.cols() : m.rows();
    const std::size_t cols = transposed ? m.rows() : m.cols();
    orthogonalize_columns(a, rows, cols, nullptr);
    std::vector<double> sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) sigma[j] = std::sqrt(dot(&a[j * rows], &a[j * rows], rows));
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

bool is_orthogonal(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw ShapeError("is_orthogonal: matrix is not square");
    return frobenius(m * m.transpose() - Matrix::identity(m.rows())) <= tol;
}

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ShapeError("random_orthogonal: n must be positive");
    return complete_orthonormal(random_gaussian_matrix(n, n, seed));
}

}  // namespace tenspec
