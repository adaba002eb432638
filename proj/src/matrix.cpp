#include "qsr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qsr {

namespace {

// Below this many fused multiply-adds the parallel kernels run serially.
constexpr std::size_t kParallelWork = std::size_t{1} << 15;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix out(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "from_rows: ragged row lengths");
        std::size_t j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    return out;
}

Matrix Matrix::from_column(std::span<const double> column) {
    Matrix out(column.size(), 1);
    for (std::size_t i = 0; i < column.size(); ++i) out(i, 0) = column[i];
    return out;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
    require(values.size() == rows_, "set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
    require(first + count <= cols_, "columns: range out of bounds");
    Matrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "multiply: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    if (out.empty() || a.cols() == 0) return out;
    const auto n = static_cast<std::int64_t>(a.rows());
    const bool parallel = a.rows() * a.cols() * b.cols() >= kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        auto orow = out.row(static_cast<std::size_t>(i));
        const auto arow = a.row(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix congruence(const Matrix& s, const Matrix& b) {
    require(s.rows() == s.cols(), "congruence: s must be square");
    require(s.cols() == b.rows(), "congruence: dimensions differ");
    const Matrix t = multiply(s, b);
    const std::size_t n = b.cols();
    Matrix out(n, n);
    if (n == 0) return out;
    const auto nn = static_cast<std::int64_t>(n);
    const bool parallel = n * n * b.rows() >= kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < nn; ++i) {
        for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < b.rows(); ++k) acc += b(k, static_cast<std::size_t>(i)) * t(k, j);
            out(static_cast<std::size_t>(i), j) = acc;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
    return out;
}

Matrix gram(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix out(n, n);
    const auto nn = static_cast<std::int64_t>(n);
    const bool parallel = n * n * a.rows() >= kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < nn; ++i) {
        for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, static_cast<std::size_t>(i)) * a(k, j);
            out(static_cast<std::size_t>(i), j) = acc;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
    return out;
}

std::vector<double> multiply_vec(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "multiply_vec: length mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto arow = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += arow[j] * x[j];
        out[i] = acc;
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

Matrix operator*(double scalar, const Matrix& a) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= scalar;
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "operator+: shape mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += b(i, j);
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "operator-: shape mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) -= b(i, j);
    return out;
}

Matrix symmetrized(const Matrix& a) {
    require(a.rows() == a.cols(), "symmetrized: matrix must be square");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
    return out;
}

Matrix kron_identity_left(std::size_t copies, const Matrix& b) {
    require(copies >= 1, "kron_identity_left: copy count must be positive");
    Matrix out(copies * b.rows(), copies * b.cols());
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(c * b.rows() + i, c * b.cols() + j) = b(i, j);
    return out;
}

Matrix hcat(const Matrix& left, const Matrix& right) {
    require(left.rows() == right.rows(), "hcat: row counts differ");
    Matrix out(left.rows(), left.cols() + right.cols());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < left.cols(); ++j) out(i, j) = left(i, j);
        for (std::size_t j = 0; j < right.cols(); ++j) out(i, left.cols() + j) = right(i, j);
    }
    return out;
}

Matrix vcat(const Matrix& top, const Matrix& bottom) {
    require(top.cols() == bottom.cols(), "vcat: column counts differ");
    Matrix out(top.rows() + bottom.rows(), top.cols());
    for (std::size_t i = 0; i < top.rows(); ++i)
        for (std::size_t j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
    for (std::size_t i = 0; i < bottom.rows(); ++i)
        for (std::size_t j = 0; j < bottom.cols(); ++j) out(top.rows() + i, j) = bottom(i, j);
    return out;
}

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

namespace ref {

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto orow = out.row(i);
        const auto arow = a.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix congruence(const Matrix& s, const Matrix& b) {
    if (s.rows() != s.cols() || s.cols() != b.rows())
        throw std::invalid_argument("congruence: dimensions differ");
    const Matrix t = ref::multiply(s, b);
    const std::size_t n = b.cols();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < b.rows(); ++k) acc += b(k, i) * t(k, j);
            out(i, j) = acc;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
    return out;
}

}  // namespace ref

}  // namespace qsr
