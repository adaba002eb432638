#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qsr/matrix.hpp"

namespace qsr {

// Numerical slack applied to exact-arithmetic conditions. Rank thresholds are
// relative to the largest singular value; PSD slack is relative to the
// spectral scale of the tested matrix.
struct ToleranceConfig {
    double rank_rel_tol = 1e-10;
    double psd_abs_tol = 1e-8;
    double residual_tol = 1e-8;

    void validate() const;
};

struct SvdResult {
    std::vector<double> singular_values;  // nonincreasing
    Matrix right_vectors;                 // V, cols(a) x cols(a), orthonormal
    Matrix column_images;                 // a*V; column i equals sigma_i * u_i
};

// One-sided Jacobi SVD. Accepts wide, tall and rank-deficient inputs.
SvdResult svd(const Matrix& a);

struct RankResult {
    std::size_t rank = 0;
    std::vector<double> singular_values;
};

RankResult rank_with_tolerance(const Matrix& a, const ToleranceConfig& cfg);

// Orthonormal basis of the right null space; cols(a) - rank(a) columns.
Matrix null_space_basis(const Matrix& a, const ToleranceConfig& cfg);

// Orthonormal basis of the column space; rank(a) columns.
Matrix orthonormal_range_basis(const Matrix& a, const ToleranceConfig& cfg);

struct SymEigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns, orthonormal
};

// Cyclic Jacobi eigensolver; the input is symmetrized first.
SymEigenResult sym_eigen(const Matrix& a);

double min_eigen_sym(const Matrix& a);

struct PsdResult {
    bool verdict = false;
    double margin = 0.0;  // smallest eigenvalue of the symmetrized input
    double scale = 0.0;   // spectral scale used for the slack band
};

PsdResult is_psd(const Matrix& a, const ToleranceConfig& cfg);

// Doubling search for mu with q - mu*b'b negative definite; present exactly
// when the null-space-restricted form b_perp' q b_perp is strictly negative
// definite.
std::optional<double> finsler_mu_search(const Matrix& q, const Matrix& b, double mu_max,
                                        const ToleranceConfig& cfg);

struct LeastSquaresResult {
    std::vector<double> solution;
    double residual = 0.0;
};

// Minimum-norm least squares via the SVD.
LeastSquaresResult solve_min_norm(const Matrix& a, std::span<const double> rhs,
                                  const ToleranceConfig& cfg);

}  // namespace qsr
