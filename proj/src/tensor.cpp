#include "tenspec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tenspec/error.hpp"

namespace tenspec {

namespace {

void require_finite(std::span<const double> data, const char* what) {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(what) + ": non-finite entry");
        }
    }
}

void check_mode(const Shape& shape, std::size_t d) {
    if (d < 1 || d > shape.order()) {
        throw ShapeError("mode " + std::to_string(d) + " out of range 1.." +
                         std::to_string(shape.order()));
    }
}

// Column strides of the forward cyclic unfolding; entry d-1 is unused.
std::vector<std::size_t> cyclic_strides(const Shape& shape, std::size_t d) {
    const std::size_t order = shape.order();
    std::vector<std::size_t> stride(order, 0);
    std::size_t s = 1;
    for (std::size_t t = 1; t < order; ++t) {
        const std::size_t k = (d - 1 + t) % order;
        stride[k] = s;
        s *= shape.dims()[k];
    }
    return stride;
}

// Walks every multi-index in row-major order, calling f(offset, index).
template <typename F>
void for_each_index(const Shape& shape, F&& f) {
    const auto& dims = shape.dims();
    std::vector<std::size_t> index(dims.size(), 0);
    for (std::size_t off = 0; off < shape.size(); ++off) {
        f(off, index);
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++index[k] < dims[k]) break;
            index[k] = 0;
        }
    }
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(op) + ": shape mismatch");
    }
}

}  // namespace

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) {
        throw ShapeError("tensor order must be at least 2");
    }
    size_ = 1;
    for (std::size_t n : dims_) {
        if (n == 0) throw ShapeError("mode sizes must be positive");
        if (size_ > std::numeric_limits<std::size_t>::max() / n) {
            throw ShapeError("element count overflows");
        }
        size_ *= n;
    }
}

std::size_t Shape::dim(std::size_t d) const {
    check_mode(*this, d);
    return dims_[d - 1];
}

bool Shape::is_cubic() const noexcept {
    return std::all_of(dims_.begin(), dims_.end(), [&](std::size_t n) { return n == dims_.front(); });
}

Shape Shape::with_dim(std::size_t d, std::size_t n) const {
    check_mode(*this, d);
    auto dims = dims_;
    dims[d - 1] = n;
    return Shape(std::move(dims));
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix data length " + std::to_string(data_.size()) + " != " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: size mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix difference: size mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

double inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix inner: size mismatch");
    return std::inner_product(a.data().begin(), a.data().end(), b.data().begin(), 0.0);
}

double frobenius(const Matrix& m) { return std::sqrt(inner(m, m)); }

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), data_(shape_.size(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) + " != element count " +
                         std::to_string(shape_.size()));
    }
    require_finite(data_, "tensor");
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
    return DenseTensor(Shape{m.rows(), m.cols()}, std::vector<double>(m.data().begin(), m.data().end()));
}

DenseTensor DenseTensor::diagonal(std::span<const double> diag, std::size_t order) {
    if (diag.empty()) throw ShapeError("diagonal: empty diagonal");
    const std::size_t n = diag.size();
    DenseTensor t(Shape(std::vector<std::size_t>(order, n)));
    // Offset of (i,...,i) is i * (1 + n + n^2 + ...).
    std::size_t step = 0, p = 1;
    for (std::size_t k = 0; k < order; ++k, p *= n) step += p;
    for (std::size_t i = 0; i < n; ++i) t.data_[i * step] = diag[i];
    require_finite(t.data_, "diagonal");
    return t;
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
    const auto& dims = shape_.dims();
    if (index.size() != dims.size()) throw ShapeError("index arity does not match tensor order");
    std::size_t off = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (index[k] >= dims[k]) throw ShapeError("index out of range");
        off = off * dims[k] + index[k];
    }
    return off;
}

double DenseTensor::at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

Matrix DenseTensor::to_matrix() const {
    if (order() != 2) throw ShapeError("to_matrix: tensor order is not 2");
    return Matrix(shape_.dims()[0], shape_.dims()[1], data_);
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "sum");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return DenseTensor(a.shape(), std::move(out));
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "difference");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return DenseTensor(a.shape(), std::move(out));
}

DenseTensor operator*(double c, const DenseTensor& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a[i];
    return DenseTensor(a.shape(), std::move(out));
}

double inner(const DenseTensor& x, const DenseTensor& y) {
    require_same_shape(x, y, "inner");
    return std::inner_product(x.data().begin(), x.data().end(), y.data().begin(), 0.0);
}

double frobenius(const DenseTensor& x) {
    return std::sqrt(std::inner_product(x.data().begin(), x.data().end(), x.data().begin(), 0.0));
}

Matrix matricize(const DenseTensor& x, std::size_t d) {
    const Shape& shape = x.shape();
    check_mode(shape, d);
    const std::size_t rows = shape.dims()[d - 1];
    const std::size_t cols = shape.size() / rows;
    const auto stride = cyclic_strides(shape, d);
    std::vector<double> out(shape.size());
    for_each_index(shape, [&](std::size_t off, const std::vector<std::size_t>& idx) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) col += idx[k] * stride[k];
        out[idx[d - 1] * cols + col] = x[off];
    });
    return Matrix(rows, cols, std::move(out));
}

DenseTensor tensorize(const Matrix& m, std::size_t d, const Shape& shape) {
    check_mode(shape, d);
    const std::size_t rows = shape.dims()[d - 1];
    const std::size_t cols = shape.size() / rows;
    if (m.rows() != rows || m.cols() != cols) {
        throw ShapeError("tensorize: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", mode-" + std::to_string(d) + " unfolding is " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    const auto stride = cyclic_strides(shape, d);
    std::vector<double> out(shape.size());
    const auto src = m.data();
    for_each_index(shape, [&](std::size_t off, const std::vector<std::size_t>& idx) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) col += idx[k] * stride[k];
        out[off] = src[idx[d - 1] * cols + col];
    });
    return DenseTensor(shape, std::move(out));
}

DenseTensor mode_mul(const DenseTensor& x, std::size_t d, const Matrix& m) {
    check_mode(x.shape(), d);
    if (m.cols() != x.shape().dims()[d - 1]) {
        throw ShapeError("mode_mul: matrix has " + std::to_string(m.cols()) + " columns, mode " +
                         std::to_string(d) + " has size " + std::to_string(x.shape().dims()[d - 1]));
    }
    return tensorize(m * matricize(x, d), d, x.shape().with_dim(d, m.rows()));
}

DenseTensor multi_mode_mul(const DenseTensor& x, std::span<const Matrix> factors) {
    if (factors.size() != x.order()) {
        throw ShapeError("multi_mode_mul: expected " + std::to_string(x.order()) + " factors, got " +
                         std::to_string(factors.size()));
    }
    DenseTensor out = x;
    for (std::size_t d = 1; d <= factors.size(); ++d) out = mode_mul(out, d, factors[d - 1]);
    return out;
}

DenseTensor outer(std::span<const std::vector<double>> vectors) {
    if (vectors.size() < 2) throw ShapeError("outer: need at least two vectors");
    std::vector<std::size_t> dims;
    for (const auto& v : vectors) {
        if (v.empty()) throw ShapeError("outer: empty vector");
        dims.push_back(v.size());
    }
    Shape shape(std::move(dims));
    std::vector<double> out(shape.size());
    for_each_index(shape, [&](std::size_t off, const std::vector<std::size_t>& idx) {
        double prod = 1.0;
        for (std::size_t k = 0; k < idx.size(); ++k) prod *= vectors[k][idx[k]];
        out[off] = prod;
    });
    return DenseTensor(std::move(shape), std::move(out));
}

DenseTensor outer(std::initializer_list<std::vector<double>> vectors) {
    return outer(std::span<const std::vector<double>>(vectors.begin(), vectors.size()));
}

namespace {

void require_cubic(const DenseTensor& x, const char* op) {
    if (!x.shape().is_cubic()) throw ShapeError(std::string(op) + ": tensor is not cubic");
}

// Calls f(perm) for every permutation of 0..order-1, identity first.
template <typename F>
void for_each_permutation(std::size_t order, F&& f) {
    std::vector<std::size_t> perm(order);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        f(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

std::size_t permuted_offset(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& perm,
                            std::size_t n) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) off = off * n + idx[perm[k]];
    return off;
}

}  // namespace

bool is_symmetric(const DenseTensor& x, double tol) {
    require_cubic(x, "is_symmetric");
    const std::size_t n = x.shape().dims().front();
    const double bound = tol * std::max(1.0, frobenius(x));
    bool ok = true;
    for_each_permutation(x.order(), [&](const std::vector<std::size_t>& perm) {
        if (!ok) return;
        for_each_index(x.shape(), [&](std::size_t off, const std::vector<std::size_t>& idx) {
            if (std::abs(x[off] - x[permuted_offset(idx, perm, n)]) > bound) ok = false;
        });
    });
    return ok;
}

DenseTensor symmetrize(const DenseTensor& x) {
    require_cubic(x, "symmetrize");
    // Averaging identical values can round; symmetric inputs come back untouched.
    if (is_symmetric(x, 0.0)) return x;
    const std::size_t n = x.shape().dims().front();
    std::vector<double> acc(x.size(), 0.0);
    std::size_t count = 0;
    for_each_permutation(x.order(), [&](const std::vector<std::size_t>& perm) {
        ++count;
        for_each_index(x.shape(), [&](std::size_t off, const std::vector<std::size_t>& idx) {
            acc[off] += x[permuted_offset(idx, perm, n)];
        });
    });
    for (double& v : acc) v /= static_cast<double>(count);
    return DenseTensor(x.shape(), std::move(acc));
}

}  // namespace tenspec
