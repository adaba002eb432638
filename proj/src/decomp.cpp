#include "qsr/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsr {

namespace {

constexpr double kJacobiTol = 1e-14;
constexpr int kMaxSweeps = 64;

void check_input(const Matrix& a, const char* op) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument(std::string(op) + ": matrix is empty");
    if (!a.all_finite())
        throw std::invalid_argument(std::string(op) + ": non-finite entries");
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Flip column signs so the entry of largest magnitude is positive. Keeps the
// factorization deterministic across rotation orderings.
void normalize_column_signs(Matrix& v, Matrix* tracked) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double m = std::abs(v(i, j));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        if (best > 0.0 && v(arg, j) < 0.0) {
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
            if (tracked)
                for (std::size_t i = 0; i < tracked->rows(); ++i)
                    (*tracked)(i, j) = -(*tracked)(i, j);
        }
    }
}

}  // namespace

void ToleranceConfig::validate() const {
    if (!(rank_rel_tol > 0.0) || !(psd_abs_tol > 0.0) || !(residual_tol > 0.0))
        throw std::invalid_argument("ToleranceConfig: tolerances must be strictly positive");
}

SvdResult svd(const Matrix& a) {
    check_input(a, "svd");
    const std::size_t n = a.cols();

    // Work on transposes so every "column" is a contiguous row.
    Matrix wt = a.transposed();      // n x rows: row i is column i of a
    Matrix vt = Matrix::identity(n);  // accumulated right rotations

    bool rotated = true;
    for (int sweep = 0; sweep < kMaxSweeps && rotated; ++sweep) {
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto wp = wt.row(p);
                auto wq = wt.row(q);
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t k = 0; k < wp.size(); ++k) {
                    app += wp[k] * wp[k];
                    aqq += wq[k] * wq[k];
                    apq += wp[k] * wq[k];
                }
                if (apq == 0.0 || std::abs(apq) <= kJacobiTol * std::sqrt(app * aqq)) continue;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < wp.size(); ++k) {
                    const double x = wp[k], y = wq[k];
                    wp[k] = c * x - s * y;
                    wq[k] = s * x + c * y;
                }
                auto vp = vt.row(p);
                auto vq = vt.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = vp[k], y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
                rotated = true;
            }
        }
    }

    std::vector<double> sigma(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (double v : wt.row(i)) acc += v * v;
        sigma[i] = std::sqrt(acc);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult out;
    out.singular_values.resize(n);
    out.right_vectors = Matrix(n, n);
    out.column_images = Matrix(a.rows(), n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.singular_values[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, j) = vt(src, i);
        for (std::size_t i = 0; i < a.rows(); ++i) out.column_images(i, j) = wt(src, i);
    }
    normalize_column_signs(out.right_vectors, &out.column_images);
    return out;
}

RankResult rank_with_tolerance(const Matrix& a, const ToleranceConfig& cfg) {
    cfg.validate();
    SvdResult dec = svd(a);
    RankResult out;
    out.singular_values = std::move(dec.singular_values);
    const double sigma_max = out.singular_values.empty() ? 0.0 : out.singular_values.front();
    if (sigma_max > 0.0) {
        for (double s : out.singular_values)
            if (s > cfg.rank_rel_tol * sigma_max) ++out.rank;
    }
    return out;
}

Matrix null_space_basis(const Matrix& a, const ToleranceConfig& cfg) {
    cfg.validate();
    const SvdResult dec = svd(a);
    const double sigma_max = dec.singular_values.empty() ? 0.0 : dec.singular_values.front();
    std::size_t rank = 0;
    if (sigma_max > 0.0) {
        for (double s : dec.singular_values)
            if (s > cfg.rank_rel_tol * sigma_max) ++rank;
    }
    return dec.right_vectors.columns(rank, a.cols() - rank);
}

Matrix orthonormal_range_basis(const Matrix& a, const ToleranceConfig& cfg) {
    cfg.validate();
    const SvdResult dec = svd(a);
    const double sigma_max = dec.singular_values.empty() ? 0.0 : dec.singular_values.front();
    std::size_t rank = 0;
    if (sigma_max > 0.0) {
        for (double s : dec.singular_values)
            if (s > cfg.rank_rel_tol * sigma_max) ++rank;
    }
    Matrix basis(a.rows(), rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            basis(i, j) = dec.column_images(i, j) / dec.singular_values[j];
    return basis;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, with the
// orthogonal transform accumulated in z.
void tridiagonalize(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(z.rows());
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    const double ej = e[j] - hh * f;
                    e[j] = ej;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + ej * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (int j = 0; j < i; ++j) {
                double g = 0.0;
                for (int k = 0; k < i; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            z(j, i) = 0.0;
            z(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal form; eigenvectors tracked in z.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    constexpr double eps = 2.220446049250313e-16;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 64)
                    throw std::runtime_error("sym_eigen: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SymEigenResult sym_eigen(const Matrix& a) {
    check_input(a, "sym_eigen");
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigen: matrix must be square");
    const std::size_t n = a.rows();
    Matrix z = symmetrized(a);
    std::vector<double> d, e;
    tridiagonalize(z, d, e);
    tridiagonal_ql(d, e, z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    SymEigenResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = z(i, order[j]);
    }
    normalize_column_signs(out.vectors, nullptr);
    return out;
}

double min_eigen_sym(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_eigen_sym: matrix must be square");
    return sym_eigen(a).values.front();
}

PsdResult is_psd(const Matrix& a, const ToleranceConfig& cfg) {
    cfg.validate();
    if (a.rows() != a.cols()) throw std::invalid_argument("is_psd: matrix must be square");
    if (a.rows() == 0) return {true, 0.0, 0.0};
    const SymEigenResult eig = sym_eigen(a);
    PsdResult out;
    out.margin = eig.values.front();
    out.scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    out.verdict = out.margin >= -cfg.psd_abs_tol * (1.0 + out.scale);
    return out;
}

std::optional<double> finsler_mu_search(const Matrix& q, const Matrix& b, double mu_max,
                                        const ToleranceConfig& cfg) {
    cfg.validate();
    check_input(q, "finsler_mu_search");
    check_input(b, "finsler_mu_search");
    if (q.rows() != q.cols()) throw std::invalid_argument("finsler_mu_search: q must be square");
    if (b.cols() != q.cols())
        throw std::invalid_argument("finsler_mu_search: b column count must match q");
    const RankResult br = rank_with_tolerance(b, cfg);
    if (br.rank >= b.cols())
        throw std::invalid_argument("finsler_mu_search: b must have a nontrivial null space");

    const Matrix q_sym = symmetrized(q);
    const Matrix b_perp = null_space_basis(b, cfg);
    const SymEigenResult restricted = sym_eigen(congruence(q_sym, b_perp));
    const double lambda_max = restricted.values.back();
    const double scale =
        std::max(std::abs(restricted.values.front()), std::abs(restricted.values.back()));
    if (lambda_max >= -cfg.psd_abs_tol * (1.0 + scale)) return std::nullopt;

    const Matrix btb = gram(b);
    for (double mu = 0.0; mu <= mu_max; mu = (mu == 0.0 ? 1.0 : 2.0 * mu)) {
        const Matrix candidate = q_sym - mu * btb;
        if (sym_eigen(candidate).values.back() < 0.0) return mu;
    }
    return std::nullopt;
}

LeastSquaresResult solve_min_norm(const Matrix& a, std::span<const double> rhs,
                                  const ToleranceConfig& cfg) {
    cfg.validate();
    check_input(a, "solve_min_norm");
    if (rhs.size() != a.rows()) throw std::invalid_argument("solve_min_norm: rhs length mismatch");
    const SvdResult dec = svd(a);
    const double sigma_max = dec.singular_values.empty() ? 0.0 : dec.singular_values.front();

    LeastSquaresResult out;
    out.solution.assign(a.cols(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double sigma = dec.singular_values[j];
        if (sigma_max == 0.0 || sigma <= cfg.rank_rel_tol * sigma_max) break;
        // u_j' rhs with u_j = column_images(:, j) / sigma.
        double coeff = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) coeff += dec.column_images(i, j) * rhs[i];
        coeff /= sigma * sigma;
        for (std::size_t i = 0; i < a.cols(); ++i)
            out.solution[i] += coeff * dec.right_vectors(i, j);
    }

    const std::vector<double> fit = multiply_vec(a, out.solution);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double d = fit[i] - rhs[i];
        acc += d * d;
    }
    out.residual = std::sqrt(acc);
    return out;
}

}  // namespace qsr
