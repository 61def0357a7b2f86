#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tenspec {

// Mode sizes n_1..n_D of a tensor, D >= 2.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::size_t> dims);
    Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

    std::size_t order() const noexcept { return dims_.size(); }
    // Size of mode d, 1-based.
    std::size_t dim(std::size_t d) const;
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return size_; }
    bool is_cubic() const noexcept;
    // Same dims with mode d (1-based) resized.
    Shape with_dim(std::size_t d, std::size_t n) const;

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    std::vector<std::size_t> dims_;
    std::size_t size_ = 0;
};

// Dense row-major matrix. Indices are 0-based.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> data() const noexcept { return data_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::vector<double> column(std::size_t j) const;
    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);
double frobenius(const Matrix& m);
double inner(const Matrix& a, const Matrix& b);

// D-mode dense array, row-major with the last index varying fastest.
class DenseTensor {
public:
    DenseTensor() = default;
    // Zero tensor.
    explicit DenseTensor(Shape shape);
    // Rejects a length mismatch and non-finite entries.
    DenseTensor(Shape shape, std::vector<double> data);

    // A matrix viewed as an order-2 tensor.
    static DenseTensor from_matrix(const Matrix& m);
    // 0-based diagonal entries on a cubic n^D tensor.
    static DenseTensor diagonal(std::span<const double> diag, std::size_t order);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }

    double operator[](std::size_t offset) const { return data_[offset]; }
    // 0-based multi-index.
    double at(std::span<const std::size_t> index) const;
    double at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    std::size_t offset(std::span<const std::size_t> index) const;

    Matrix to_matrix() const;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(double c, const DenseTensor& a);

double inner(const DenseTensor& x, const DenseTensor& y);
double frobenius(const DenseTensor& x);

// Mode-d unfolding (d is 1-based): rows indexed by i_d, columns in forward
// cyclic order i_{d+1}, ..., i_D, i_1, ..., i_{d-1} with i_{d+1} fastest.
Matrix matricize(const DenseTensor& x, std::size_t d);
// Adjoint and inverse of matricize for the given shape.
DenseTensor tensorize(const Matrix& m, std::size_t d, const Shape& shape);

// X ×_d M, with M of size m×n_d; the result has n_d replaced by m.
DenseTensor mode_mul(const DenseTensor& x, std::size_t d, const Matrix& m);
// X ×_1 factors[0] ⋯ ×_D factors[D-1].
DenseTensor multi_mode_mul(const DenseTensor& x, std::span<const Matrix> factors);

DenseTensor outer(std::span<const std::vector<double>> vectors);
DenseTensor outer(std::initializer_list<std::vector<double>> vectors);

bool is_symmetric(const DenseTensor& x, double tol);
// Average over all D! index permutations.
DenseTensor symmetrize(const DenseTensor& x);

}  // namespace tenspec
