#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qsr {

// One recorded input-output run. Inputs and outputs are sampled together, so
// the two sequences always have the same length.
class Trajectory {
public:
    Trajectory(std::vector<std::vector<double>> inputs, std::vector<std::vector<double>> outputs,
               std::optional<double> sample_time = std::nullopt);

    std::size_t raw_length() const { return inputs_.size(); }
    std::size_t input_dim() const { return inputs_.front().size(); }
    std::size_t output_dim() const { return outputs_.front().size(); }

    const std::vector<std::vector<double>>& inputs() const { return inputs_; }
    const std::vector<std::vector<double>>& outputs() const { return outputs_; }
    std::optional<double> sample_time() const { return sample_time_; }

private:
    std::vector<std::vector<double>> inputs_;
    std::vector<std::vector<double>> outputs_;
    std::optional<double> sample_time_;
};

// A multi-shot dataset: q trajectories sharing input and output dimensions.
class DatasetCollection {
public:
    explicit DatasetCollection(std::vector<Trajectory> shots);

    std::size_t shot_count() const { return shots_.size(); }
    std::size_t input_dim() const { return shots_.front().input_dim(); }
    std::size_t output_dim() const { return shots_.front().output_dim(); }
    const std::vector<Trajectory>& shots() const { return shots_; }
    const Trajectory& shot(std::size_t i) const { return shots_.at(i); }

private:
    std::vector<Trajectory> shots_;
};

// Problem dimensions for the finite-horizon dissipativity test.
//   horizon      - number of stacked windows per column (L)
//   window       - largest sample shift coupled by the supply (N)
//   zero_prefix  - number of leading samples pinned to zero (nu)
//   order_bound  - assumed upper bound on the plant order (n_max)
struct ProblemDims {
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::size_t zero_prefix = 0;
    std::size_t order_bound = 0;

    void validate() const;
};

// Number of windowed samples: raw length minus the window size.
std::size_t effective_window_count(const Trajectory& traj, std::size_t window);

// Diagnostics for the verification hypotheses. Checks, in order:
//   (a) total windowed length >= (L-1)(m+p+q)
//   (b) order_bound+1 < L <= T_i for every shot
//   (c) order_bound <= zero_prefix < L
// plus an informational bound used by the horizon-monotonicity argument.
struct PreconditionReport {
    bool length_ok = false;
    std::size_t windowed_total = 0;
    std::size_t length_required = 0;

    bool horizon_ok = false;
    std::size_t min_windowed = 0;

    bool prefix_ok = false;

    bool proof_bound_ok = false;
    std::size_t proof_bound_required = 0;

    std::size_t horizon = 0;
    std::size_t window = 0;
    std::size_t zero_prefix = 0;
    std::size_t order_bound = 0;

    bool all_ok() const { return length_ok && horizon_ok && prefix_ok; }
};

PreconditionReport validate_data_hypotheses(const DatasetCollection& coll,
                                                   const ProblemDims& dims);

}  // namespace qsr
