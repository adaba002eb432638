#include "qsr/lti.hpp"

#include <cmath>
#include <stdexcept>

#include "qsr/rng.hpp"

namespace qsr {

LtiSystem::LtiSystem(Matrix a_in, Matrix b_in, Matrix c_in, Matrix d_in)
    : a(std::move(a_in)), b(std::move(b_in)), c(std::move(c_in)), d(std::move(d_in)) {
    if (a.rows() != a.cols()) throw std::invalid_argument("LtiSystem: A must be square");
    if (b.rows() != a.rows()) throw std::invalid_argument("LtiSystem: B row count mismatch");
    if (c.cols() != a.rows()) throw std::invalid_argument("LtiSystem: C column count mismatch");
    if (d.rows() != c.rows() || d.cols() != b.cols())
        throw std::invalid_argument("LtiSystem: D shape mismatch");
    if (!a.all_finite() || !b.all_finite() || !c.all_finite() || !d.all_finite())
        throw std::invalid_argument("LtiSystem: non-finite entries");
}

std::vector<std::vector<double>> simulate(const LtiSystem& sys, std::span<const double> x0,
                                          const std::vector<std::vector<double>>& inputs) {
    if (x0.size() != sys.order()) throw std::invalid_argument("simulate: state size mismatch");
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<std::vector<double>> outputs;
    outputs.reserve(inputs.size());
    for (const auto& u : inputs) {
        if (u.size() != sys.input_dim())
            throw std::invalid_argument("simulate: input size mismatch");
        std::vector<double> y = multiply_vec(sys.c, x);
        const std::vector<double> feed = multiply_vec(sys.d, u);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += feed[i];
        outputs.push_back(std::move(y));

        std::vector<double> next = multiply_vec(sys.a, x);
        const std::vector<double> forced = multiply_vec(sys.b, u);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += forced[i];
        x = std::move(next);
    }
    return outputs;
}

Matrix input_to_window_map(const LtiSystem& sys, std::size_t horizon, std::size_t zero_prefix,
                           std::size_t window) {
    if (zero_prefix >= horizon)
        throw std::invalid_argument("input_to_window_map: zero_prefix must be below horizon");
    const std::size_t m = sys.input_dim();
    const std::size_t p = sys.output_dim();
    const std::size_t steps = horizon + window - zero_prefix;   // free input samples
    const std::size_t windows = horizon - zero_prefix;          // summed windows
    const std::size_t window_len = (window + 1) * (m + p);

    Matrix map(windows * window_len, steps * m);
    const std::vector<double> x0(sys.order(), 0.0);
    std::vector<std::vector<double>> impulse(steps, std::vector<double>(m, 0.0));
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t ch = 0; ch < m; ++ch) {
            impulse[t][ch] = 1.0;
            const auto response = simulate(sys, x0, impulse);
            impulse[t][ch] = 0.0;

            const std::size_t col = t * m + ch;
            for (std::size_t k = 0; k < windows; ++k)
                for (std::size_t shift = 0; shift <= window; ++shift) {
                    const std::size_t base = k * window_len + shift * (m + p);
                    for (std::size_t r = 0; r < p; ++r)
                        map(base + r, col) = response[k + shift][r];
                    // Input part: one for the matching impulse, zero otherwise.
                    if (k + shift == t) map(base + p + ch, col) = 1.0;
                }
        }
    }
    return map;
}

OracleVerdict oracle_dissipative(const LtiSystem& sys, const SupplyForm& form,
                                 std::size_t horizon, std::size_t zero_prefix,
                                 std::size_t window, const ToleranceConfig& cfg) {
    cfg.validate();
    if (form.input_dim != sys.input_dim() || form.output_dim != sys.output_dim())
        throw std::invalid_argument("oracle_dissipative: supply dimensions mismatch the system");
    if (form.window != window)
        throw std::invalid_argument("oracle_dissipative: supply window mismatch");
    const Matrix map = input_to_window_map(sys, horizon, zero_prefix, window);
    const Matrix phi = kron_identity_left(horizon - zero_prefix, form.phi);
    const PsdResult psd = is_psd(congruence(phi, map), cfg);
    OracleVerdict out;
    out.verdict = psd.verdict;
    out.margin = psd.margin;
    out.boundary = std::abs(psd.margin) <= 10.0 * cfg.psd_abs_tol * (1.0 + psd.scale);
    return out;
}

DatasetCollection generate_pe_data(const LtiSystem& sys, std::size_t shots,
                                   std::span<const std::size_t> raw_lengths,
                                   const ExcitationSpec& exc, const InitialStatePolicy& init) {
    if (shots < 1) throw std::invalid_argument("generate_pe_data: need at least one shot");
    if (raw_lengths.size() != shots)
        throw std::invalid_argument("generate_pe_data: one length per shot required");
    if (!(exc.stddev > 0.0))
        throw std::invalid_argument("generate_pe_data: excitation stddev must be positive");

    std::vector<Trajectory> result;
    result.reserve(shots);
    for (std::size_t shot = 0; shot < shots; ++shot) {
        if (raw_lengths[shot] < 1)
            throw std::invalid_argument("generate_pe_data: shot lengths must be positive");
        Rng rng(exc.seed + shot);
        std::vector<double> x0(sys.order(), 0.0);
        if (init.kind == InitialStatePolicy::Kind::Gaussian)
            for (double& v : x0) v = rng.normal(0.0, init.stddev);
        std::vector<std::vector<double>> inputs(raw_lengths[shot],
                                                std::vector<double>(sys.input_dim()));
        for (auto& u : inputs)
            for (double& v : u) v = rng.normal(exc.mean, exc.stddev);
        auto outputs = simulate(sys, x0, inputs);
        result.emplace_back(std::move(inputs), std::move(outputs));
    }
    return DatasetCollection(std::move(result));
}

}  // namespace qsr
