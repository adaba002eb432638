#pragma once

#include <span>
#include <vector>

#include "qsr/matrix.hpp"
#include "qsr/trajectory.hpp"

namespace qsr {

// One (m+p)x(m+p) coupling block between window shifts i and j (i <= j). The
// block at (j, i) is always the transpose, so only the upper triangle is
// specified. Diagonal blocks must be symmetric.
struct PhiBlock {
    std::size_t i = 0;
    std::size_t j = 0;
    Matrix value;
};

// Convenience constructor from the usual QSR split: [[Q, S], [S', R]].
PhiBlock qsr_block(std::size_t i, std::size_t j, const Matrix& q, const Matrix& s,
                   const Matrix& r);

// Quadratic supply over windowed vectors Z(k); the stored matrix is exactly
// symmetric and has size (window+1)(m+p).
struct SupplyForm {
    Matrix phi;
    std::size_t window = 0;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;

    std::size_t block_dim() const { return input_dim + output_dim; }
    Matrix block(std::size_t i, std::size_t j) const;
};

SupplyForm assemble_phi_n(std::span<const PhiBlock> blocks, std::size_t window, std::size_t m,
                          std::size_t p);

// The upper-triangle blocks of the stored matrix; reassembling them
// reproduces the form exactly.
std::vector<PhiBlock> decompose_blocks(const SupplyForm& form);

// w = y'u.
SupplyForm preset_passivity(std::size_t m);

// w = gamma^2 |u|^2 - |y|^2.
SupplyForm preset_l2_gain(double gamma, std::size_t m, std::size_t p);

// w = (y(k+1) - y(k))' u(k+1).
SupplyForm preset_velocity_passivity(std::size_t m);

double evaluate_supply(std::span<const double> window_vec, const SupplyForm& form);

// Partial sums of the supply along a trajectory, one value per window.
std::vector<double> cumulative_supply(const Trajectory& traj, const SupplyForm& form);

}  // namespace qsr
