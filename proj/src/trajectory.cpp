#include "qsr/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsr {

namespace {

void check_samples(const std::vector<std::vector<double>>& samples, const char* what) {
    const std::size_t dim = samples.front().size();
    if (dim == 0) throw std::invalid_argument(std::string(what) + ": zero-dimensional samples");
    for (const auto& s : samples) {
        if (s.size() != dim)
            throw std::invalid_argument(std::string(what) + ": inconsistent sample dimension");
        for (double v : s)
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

Trajectory::Trajectory(std::vector<std::vector<double>> inputs,
                       std::vector<std::vector<double>> outputs,
                       std::optional<double> sample_time)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), sample_time_(sample_time) {
    if (inputs_.empty() || outputs_.empty())
        throw std::invalid_argument("Trajectory: empty record");
    if (inputs_.size() != outputs_.size())
        throw std::invalid_argument("Trajectory: input and output lengths differ");
    check_samples(inputs_, "Trajectory inputs");
    check_samples(outputs_, "Trajectory outputs");
}

DatasetCollection::DatasetCollection(std::vector<Trajectory> shots) : shots_(std::move(shots)) {
    if (shots_.empty()) throw std::invalid_argument("DatasetCollection: needs at least one shot");
    const std::size_t m = shots_.front().input_dim();
    const std::size_t p = shots_.front().output_dim();
    for (const auto& shot : shots_) {
        if (shot.input_dim() != m || shot.output_dim() != p)
            throw std::invalid_argument("DatasetCollection: shots disagree on dimensions");
    }
}

void ProblemDims::validate() const {
    if (horizon < 1) throw std::invalid_argument("ProblemDims: horizon must be positive");
    if (order_bound < 1) throw std::invalid_argument("ProblemDims: order bound must be positive");
    if (zero_prefix < order_bound || zero_prefix >= horizon)
        throw std::invalid_argument(
            "ProblemDims: zero prefix must satisfy order_bound <= zero_prefix < horizon");
    if (order_bound + 1 >= horizon)
        throw std::invalid_argument("ProblemDims: horizon must exceed order_bound + 1");
}

std::size_t effective_window_count(const Trajectory& traj, std::size_t window) {
    if (traj.raw_length() <= window)
        throw std::invalid_argument("trajectory shorter than window");
    return traj.raw_length() - window;
}

PreconditionReport validate_data_hypotheses(const DatasetCollection& coll,
                                                   const ProblemDims& dims) {
    PreconditionReport rep;
    rep.horizon = dims.horizon;
    rep.window = dims.window;
    rep.zero_prefix = dims.zero_prefix;
    rep.order_bound = dims.order_bound;

    const std::size_t m = coll.input_dim();
    const std::size_t p = coll.output_dim();
    const std::size_t q = coll.shot_count();

    std::size_t total = 0;
    std::size_t min_windowed = 0;
    bool first = true;
    for (const auto& shot : coll.shots()) {
        const std::size_t windowed =
            shot.raw_length() > dims.window ? shot.raw_length() - dims.window : 0;
        total += windowed;
        min_windowed = first ? windowed : std::min(min_windowed, windowed);
        first = false;
    }
    rep.windowed_total = total;
    rep.min_windowed = min_windowed;

    rep.length_required = (dims.horizon - 1) * (m + p + q);
    rep.length_ok = total >= rep.length_required;

    rep.horizon_ok = dims.order_bound + 1 < dims.horizon && dims.horizon <= min_windowed;

    rep.prefix_ok = dims.order_bound <= dims.zero_prefix && dims.zero_prefix < dims.horizon;

    rep.proof_bound_required = dims.zero_prefix * (m + p) + (dims.horizon - 1) * q;
    rep.proof_bound_ok = total >= rep.proof_bound_required;

    return rep;
}

}  // namespace qsr
