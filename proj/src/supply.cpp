#include "qsr/supply.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "qsr/hankel.hpp"

namespace qsr {

namespace {

bool nearly_symmetric(const Matrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    return worst <= 1e-12 * (1.0 + max_abs(a));
}

}  // namespace

PhiBlock qsr_block(std::size_t i, std::size_t j, const Matrix& q, const Matrix& s,
                   const Matrix& r) {
    const std::size_t p = q.rows();
    const std::size_t m = r.rows();
    if (q.cols() != p || r.cols() != m || s.rows() != p || s.cols() != m)
        throw std::invalid_argument("qsr_block: inconsistent Q/S/R dimensions");
    Matrix value(p + m, p + m);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) value(a, b) = q(a, b);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            value(a, p + b) = s(a, b);
            value(p + b, a) = s(a, b);
        }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) value(p + a, p + b) = r(a, b);
    return {i, j, value};
}

Matrix SupplyForm::block(std::size_t i, std::size_t j) const {
    const std::size_t d = block_dim();
    if (i > window || j > window) throw std::invalid_argument("SupplyForm::block: out of range");
    Matrix out(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) out(a, b) = phi(i * d + a, j * d + b);
    return out;
}

SupplyForm assemble_phi_n(std::span<const PhiBlock> blocks, std::size_t window, std::size_t m,
                          std::size_t p) {
    if (m < 1 || p < 1) throw std::invalid_argument("assemble_phi_n: dimensions must be positive");
    const std::size_t d = m + p;
    SupplyForm form;
    form.window = window;
    form.input_dim = m;
    form.output_dim = p;
    form.phi = Matrix((window + 1) * d, (window + 1) * d);

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const PhiBlock& blk : blocks) {
        if (blk.i > blk.j || blk.j > window)
            throw std::invalid_argument("assemble_phi_n: block index out of range");
        if (!seen.insert({blk.i, blk.j}).second)
            throw std::invalid_argument("assemble_phi_n: duplicate block (" +
                                        std::to_string(blk.i) + ", " + std::to_string(blk.j) +
                                        ")");
        if (blk.value.rows() != d || blk.value.cols() != d)
            throw std::invalid_argument("assemble_phi_n: block has wrong size");
        Matrix value = blk.value;
        if (blk.i == blk.j) {
            if (!nearly_symmetric(value))
                throw std::invalid_argument("assemble_phi_n: diagonal block must be symmetric");
            value = symmetrized(value);
        }
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                form.phi(blk.i * d + a, blk.j * d + b) = value(a, b);
                form.phi(blk.j * d + b, blk.i * d + a) = value(a, b);
            }
    }
    return form;
}

std::vector<PhiBlock> decompose_blocks(const SupplyForm& form) {
    std::vector<PhiBlock> out;
    for (std::size_t i = 0; i <= form.window; ++i)
        for (std::size_t j = i; j <= form.window; ++j) out.push_back({i, j, form.block(i, j)});
    return out;
}

SupplyForm preset_passivity(std::size_t m) {
    if (m < 1) throw std::invalid_argument("preset_passivity: dimension must be positive");
    const PhiBlock blk =
        qsr_block(0, 0, Matrix(m, m), 0.5 * Matrix::identity(m), Matrix(m, m));
    return assemble_phi_n({&blk, 1}, 0, m, m);
}

SupplyForm preset_l2_gain(double gamma, std::size_t m, std::size_t p) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("preset_l2_gain: gamma must be nonnegative");
    if (m < 1 || p < 1) throw std::invalid_argument("preset_l2_gain: dimensions must be positive");
    const PhiBlock blk = qsr_block(0, 0, -1.0 * Matrix::identity(p), Matrix(p, m),
                                   gamma * gamma * Matrix::identity(m));
    return assemble_phi_n({&blk, 1}, 0, m, p);
}

SupplyForm preset_velocity_passivity(std::size_t m) {
    if (m < 1)
        throw std::invalid_argument("preset_velocity_passivity: dimension must be positive");
    const std::size_t d = 2 * m;
    // Coupling (y(k+1), u(k+1)) = I/2 and (y(k), u(k+1)) = -I/2; everything
    // else zero.
    Matrix diag1(d, d);
    Matrix off(d, d);
    for (std::size_t r = 0; r < m; ++r) {
        diag1(r, m + r) = 0.5;
        diag1(m + r, r) = 0.5;
        off(r, m + r) = -0.5;
    }
    const PhiBlock blocks[] = {{0, 1, off}, {1, 1, diag1}};
    return assemble_phi_n({blocks, 2}, 1, m, m);
}

double evaluate_supply(std::span<const double> window_vec, const SupplyForm& form) {
    if (window_vec.size() != form.phi.rows())
        throw std::invalid_argument("evaluate_supply: window vector length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < form.phi.rows(); ++i) {
        double rowacc = 0.0;
        const auto row = form.phi.row(i);
        for (std::size_t j = 0; j < form.phi.cols(); ++j) rowacc += row[j] * window_vec[j];
        acc += window_vec[i] * rowacc;
    }
    return acc;
}

std::vector<double> cumulative_supply(const Trajectory& traj, const SupplyForm& form) {
    if (traj.input_dim() != form.input_dim || traj.output_dim() != form.output_dim)
        throw std::invalid_argument("cumulative_supply: dimensions mismatch");
    const auto windows = build_windowed_sequence(traj, form.window);
    std::vector<double> out;
    out.reserve(windows.size());
    double acc = 0.0;
    for (const auto& z : windows) {
        acc += evaluate_supply(z, form);
        out.push_back(acc);
    }
    return out;
}

}  // namespace qsr
