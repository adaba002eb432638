#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qsr {

// Dense real matrix, row-major storage. Zero-column (or zero-row) matrices
// are legal values: a trivial null space is reported as a basis with no
// columns.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_column(std::span<const double> column);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);
    Matrix columns(std::size_t first, std::size_t count) const;

    Matrix transposed() const;
    bool all_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Kernels. Each output entry is accumulated by its own serial inner loop, so
// the result is independent of the thread count.
Matrix multiply(const Matrix& a, const Matrix& b);
// bᵀ s b for square s; the output is mirrored to be exactly symmetric.
Matrix congruence(const Matrix& s, const Matrix& b);
Matrix gram(const Matrix& a);  // aᵀ a

std::vector<double> multiply_vec(const Matrix& a, std::span<const double> x);

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double scalar, const Matrix& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

Matrix symmetrized(const Matrix& a);
Matrix kron_identity_left(std::size_t copies, const Matrix& b);
Matrix hcat(const Matrix& left, const Matrix& right);
Matrix vcat(const Matrix& top, const Matrix& bottom);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

namespace ref {
// Serial reference kernels kept for testing; the parallel versions above must
// match them bit for bit.
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix congruence(const Matrix& s, const Matrix& b);
}  // namespace ref

}  // namespace qsr
