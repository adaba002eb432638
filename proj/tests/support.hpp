#pragma once

// Shared builders for the test suites: seeded matrices, synthetic plants and
// an independent model-based check for the zero-prefix trajectory set.

#include <cmath>
#include <optional>
#include <vector>

#include "qsr/decomp.hpp"
#include "qsr/lti.hpp"
#include "qsr/matrix.hpp"
#include "qsr/rng.hpp"
#include "qsr/supply.hpp"
#include "qsr/trajectory.hpp"

namespace testsupport {

inline qsr::Matrix random_matrix(std::size_t rows, std::size_t cols, qsr::Rng& rng,
                                 double scale = 1.0) {
    qsr::Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = scale * rng.normal();
    return out;
}

inline qsr::Matrix random_symmetric(std::size_t n, qsr::Rng& rng, double scale = 1.0) {
    return qsr::symmetrized(random_matrix(n, n, rng, scale));
}

// Orthonormal columns via Gram-Schmidt; independent of the SVD under test.
inline qsr::Matrix random_orthogonal(std::size_t n, qsr::Rng& rng) {
    qsr::Matrix q(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> v(n);
        for (auto& x : v) x = rng.normal();
        for (std::size_t prev = 0; prev < col; ++prev) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += v[i] * q(i, prev);
            for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, prev);
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) q(i, col) = v[i] / norm;
    }
    return q;
}

// Random discrete-time system with spectral radius bounded via row scaling.
inline qsr::LtiSystem random_stable_system(std::size_t order, std::size_t m, std::size_t p,
                                           qsr::Rng& rng, double radius = 0.8) {
    qsr::Matrix a = random_matrix(order, order, rng);
    // Scale by the Frobenius norm: |A| <= |A|_F, so the spectral radius ends
    // up below the requested bound.
    const double norm = qsr::frobenius_norm(a);
    if (norm > 0.0) a = (radius / norm) * a;
    return qsr::LtiSystem(a, random_matrix(order, m, rng), random_matrix(p, order, rng),
                          random_matrix(p, m, rng, 0.5));
}

inline bool is_minimal(const qsr::LtiSystem& sys, const qsr::ToleranceConfig& cfg) {
    const std::size_t n = sys.order();
    qsr::Matrix reach = sys.b;
    qsr::Matrix power = sys.b;
    for (std::size_t k = 1; k < n; ++k) {
        power = qsr::multiply(sys.a, power);
        reach = qsr::hcat(reach, power);
    }
    if (qsr::rank_with_tolerance(reach, cfg).rank != n) return false;
    qsr::Matrix obs = sys.c;
    qsr::Matrix cpow = sys.c;
    for (std::size_t k = 1; k < n; ++k) {
        cpow = qsr::multiply(cpow, sys.a);
        obs = qsr::vcat(obs, cpow);
    }
    return qsr::rank_with_tolerance(obs, cfg).rank == n;
}

// Observability at depth `steps`: zero inputs and outputs over that many
// samples force a zero state.
inline bool observable_within(const qsr::LtiSystem& sys, std::size_t steps,
                              const qsr::ToleranceConfig& cfg) {
    qsr::Matrix obs = sys.c;
    qsr::Matrix cpow = sys.c;
    for (std::size_t k = 1; k < steps; ++k) {
        cpow = qsr::multiply(cpow, sys.a);
        obs = qsr::vcat(obs, cpow);
    }
    return qsr::rank_with_tolerance(obs, cfg).rank == sys.order();
}

// Strictly input passive single-block system: y = u + (small stable tail)*u.
inline qsr::LtiSystem passive_first_order() {
    return qsr::LtiSystem(qsr::Matrix::from_rows({{0.5}}), qsr::Matrix::from_rows({{0.5}}),
                          qsr::Matrix::from_rows({{1.0}}), qsr::Matrix::from_rows({{1.0}}));
}

inline qsr::LtiSystem static_gain(double gain, std::size_t m = 1) {
    return qsr::LtiSystem(qsr::Matrix(1, 1), qsr::Matrix(1, m), qsr::Matrix(m, 1),
                          gain * qsr::Matrix::identity(m));
}

// Stable fourth-order two-channel plant satisfying CB = D = I and
// C(A - I)B = 0, which makes the two-step velocity supply exactly
// nonnegative from a zero state.
inline qsr::LtiSystem velocity_passive_plant() {
    qsr::Matrix a(4, 4);
    a(0, 0) = a(1, 1) = 0.9;
    a(2, 2) = a(3, 3) = 0.6;
    qsr::Matrix b(4, 2);
    b(0, 0) = b(1, 1) = 1.0;
    b(2, 0) = b(3, 1) = 1.0;
    qsr::Matrix c(2, 4);
    c(0, 0) = c(1, 1) = 4.0 / 3.0;
    c(0, 2) = c(1, 3) = -1.0 / 3.0;
    return qsr::LtiSystem(a, b, c, qsr::Matrix::identity(2));
}

// Model-based check of the exact trajectory set behind the data-driven test:
// inputs zero over the prefix, free afterwards, all `horizon` windows summed.
inline qsr::Matrix zero_prefix_window_map(const qsr::LtiSystem& sys, std::size_t horizon,
                                          std::size_t zero_prefix, std::size_t window) {
    const std::size_t m = sys.input_dim();
    const std::size_t p = sys.output_dim();
    const std::size_t total = horizon + window;  // samples per trajectory
    const std::size_t free_steps = total - zero_prefix;
    const std::size_t window_len = (window + 1) * (m + p);

    qsr::Matrix map(horizon * window_len, free_steps * m);
    const std::vector<double> x0(sys.order(), 0.0);
    std::vector<std::vector<double>> inputs(total, std::vector<double>(m, 0.0));
    for (std::size_t t = 0; t < free_steps; ++t) {
        for (std::size_t ch = 0; ch < m; ++ch) {
            inputs[zero_prefix + t][ch] = 1.0;
            const auto response = simulate(sys, x0, inputs);
            inputs[zero_prefix + t][ch] = 0.0;

            const std::size_t col = t * m + ch;
            for (std::size_t k = 0; k < horizon; ++k)
                for (std::size_t shift = 0; shift <= window; ++shift) {
                    const std::size_t base = k * window_len + shift * (m + p);
                    for (std::size_t r = 0; r < p; ++r)
                        map(base + r, col) = response[k + shift][r];
                    if (k + shift == zero_prefix + t) map(base + p + ch, col) = 1.0;
                }
        }
    }
    return map;
}

inline qsr::PsdResult zero_prefix_oracle(const qsr::LtiSystem& sys, const qsr::SupplyForm& form,
                                         std::size_t horizon, std::size_t zero_prefix,
                                         const qsr::ToleranceConfig& cfg) {
    const qsr::Matrix map = zero_prefix_window_map(sys, horizon, zero_prefix, form.window);
    const qsr::Matrix phi = qsr::kron_identity_left(horizon, form.phi);
    return qsr::is_psd(qsr::congruence(phi, map), cfg);
}

}  // namespace testsupport
