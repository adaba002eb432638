#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsr/decomp.hpp"
#include "qsr/matrix.hpp"
#include "qsr/supply.hpp"
#include "qsr/trajectory.hpp"

namespace qsr {

// Discrete-time state-space model x+ = Ax + Bu, y = Cx + Du.
struct LtiSystem {
    Matrix a, b, c, d;

    LtiSystem(Matrix a_in, Matrix b_in, Matrix c_in, Matrix d_in);

    std::size_t order() const { return a.rows(); }
    std::size_t input_dim() const { return b.cols(); }
    std::size_t output_dim() const { return c.rows(); }
};

std::vector<std::vector<double>> simulate(const LtiSystem& sys, std::span<const double> x0,
                                          const std::vector<std::vector<double>>& inputs);

// Linear map from the free input sequence u(0 .. horizon+window-zero_prefix-1)
// (zero initial state) to the stacked windowed vectors Z(0 ..
// horizon-zero_prefix-1). Built column by column from unit-impulse responses.
Matrix input_to_window_map(const LtiSystem& sys, std::size_t horizon, std::size_t zero_prefix,
                           std::size_t window);

struct OracleVerdict {
    bool verdict = false;
    double margin = 0.0;
    // Margin within ten PSD slack bands of zero; such cases are excluded from
    // equivalence assertions.
    bool boundary = false;
};

// Exact model-based finite-horizon dissipativity: the supply sum over all
// zero-initial-state trajectories is a quadratic form in the free inputs.
OracleVerdict oracle_dissipative(const LtiSystem& sys, const SupplyForm& form,
                                 std::size_t horizon, std::size_t zero_prefix,
                                 std::size_t window, const ToleranceConfig& cfg);

struct ExcitationSpec {
    double stddev = 0.05;
    double mean = 0.0;
    std::uint64_t seed = 0;
};

struct InitialStatePolicy {
    enum class Kind { Zero, Gaussian };
    Kind kind = Kind::Zero;
    double stddev = 0.0;

    static InitialStatePolicy zero() { return {}; }
    static InitialStatePolicy gaussian(double stddev) {
        return {Kind::Gaussian, stddev};
    }
};

// Independent seeded runs; shot i derives its stream from seed + i.
DatasetCollection generate_pe_data(const LtiSystem& sys, std::size_t shots,
                                   std::span<const std::size_t> raw_lengths,
                                   const ExcitationSpec& exc, const InitialStatePolicy& init);

}  // namespace qsr
