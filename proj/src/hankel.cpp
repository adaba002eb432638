#include "qsr/hankel.hpp"

#include <stdexcept>
#include <string>

namespace qsr {

namespace {

std::vector<std::vector<double>> raw_sequence(const Trajectory& shot, bool inputs_only) {
    if (inputs_only) return shot.inputs();
    std::vector<std::vector<double>> stacked;
    stacked.reserve(shot.raw_length());
    for (std::size_t k = 0; k < shot.raw_length(); ++k) {
        std::vector<double> sample;
        sample.reserve(shot.input_dim() + shot.output_dim());
        sample.insert(sample.end(), shot.inputs()[k].begin(), shot.inputs()[k].end());
        sample.insert(sample.end(), shot.outputs()[k].begin(), shot.outputs()[k].end());
        stacked.push_back(std::move(sample));
    }
    return stacked;
}

MosaicHankel mosaic_of(const DatasetCollection& coll, std::size_t block_rows,
                       bool inputs_only, bool outputs_instead) {
    std::vector<std::vector<std::vector<double>>> shots;
    shots.reserve(coll.shot_count());
    for (const auto& shot : coll.shots())
        shots.push_back(outputs_instead ? shot.outputs() : raw_sequence(shot, inputs_only));
    return build_mosaic_sequences(shots, block_rows);
}

}  // namespace

HankelMatrix build_hankel(const std::vector<std::vector<double>>& samples,
                          std::size_t block_rows) {
    if (block_rows < 1) throw std::invalid_argument("build_hankel: depth must be positive");
    if (samples.size() < block_rows)
        throw std::invalid_argument("build_hankel: insufficient samples for requested depth");
    const std::size_t block = samples.front().size();
    for (const auto& s : samples)
        if (s.size() != block)
            throw std::invalid_argument("build_hankel: inconsistent sample dimension");

    const std::size_t t = samples.size();
    const std::size_t cols = t - block_rows + 1;
    HankelMatrix out;
    out.block_rows = block_rows;
    out.block_size = block;
    out.source_length = t;
    out.base = Matrix(block_rows * block, cols);
    for (std::size_t i = 0; i < block_rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t r = 0; r < block; ++r)
                out.base(i * block + r, j) = samples[i + j][r];
    return out;
}

std::vector<std::vector<double>> build_windowed_sequence(const Trajectory& traj,
                                                         std::size_t window) {
    const std::size_t count = effective_window_count(traj, window);
    const std::size_t m = traj.input_dim();
    const std::size_t p = traj.output_dim();
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> z;
        z.reserve((window + 1) * (m + p));
        for (std::size_t shift = 0; shift <= window; ++shift) {
            const auto& y = traj.outputs()[k + shift];
            const auto& u = traj.inputs()[k + shift];
            z.insert(z.end(), y.begin(), y.end());
            z.insert(z.end(), u.begin(), u.end());
        }
        out.push_back(std::move(z));
    }
    return out;
}

MosaicHankel build_mosaic_sequences(const std::vector<std::vector<std::vector<double>>>& shots,
                                    std::size_t block_rows) {
    if (shots.empty()) throw std::invalid_argument("build_mosaic_sequences: no shots");
    MosaicHankel out;
    out.block_rows = block_rows;
    bool first = true;
    for (std::size_t i = 0; i < shots.size(); ++i) {
        HankelMatrix h;
        try {
            h = build_hankel(shots[i], block_rows);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("shot " + std::to_string(i) + ": " + e.what());
        }
        if (first) {
            out.block_size = h.block_size;
            out.base = h.base;
            first = false;
        } else {
            if (h.block_size != out.block_size)
                throw std::invalid_argument("build_mosaic_sequences: shots disagree on dimension");
            out.base = hcat(out.base, h.base);
        }
        const std::size_t cols = h.base.cols();
        const std::size_t start = out.base.cols() - cols;
        out.segments.push_back({start, cols});
    }
    return out;
}

MosaicHankel build_mosaic(const DatasetCollection& coll, std::size_t block_rows,
                          std::size_t window) {
    std::vector<std::vector<std::vector<double>>> shots;
    shots.reserve(coll.shot_count());
    for (std::size_t i = 0; i < coll.shot_count(); ++i) {
        try {
            shots.push_back(build_windowed_sequence(coll.shot(i), window));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("shot " + std::to_string(i) + ": " + e.what());
        }
    }
    return build_mosaic_sequences(shots, block_rows);
}

MosaicHankel input_mosaic(const DatasetCollection& coll, std::size_t block_rows) {
    return mosaic_of(coll, block_rows, true, false);
}

MosaicHankel output_mosaic(const DatasetCollection& coll, std::size_t block_rows) {
    return mosaic_of(coll, block_rows, false, true);
}

PeReport check_collective_pe(const DatasetCollection& coll, std::size_t order, bool inputs_only,
                             const ToleranceConfig& cfg) {
    if (order < 1) throw std::invalid_argument("check_collective_pe: order must be positive");
    for (std::size_t i = 0; i < coll.shot_count(); ++i)
        if (coll.shot(i).raw_length() < order)
            throw std::invalid_argument("check_collective_pe: order exceeds length of shot " +
                                        std::to_string(i));

    const std::size_t block =
        inputs_only ? coll.input_dim() : coll.input_dim() + coll.output_dim();

    PeReport rep;
    rep.order = order;
    rep.required = order * block;

    std::vector<std::vector<std::vector<double>>> shots;
    shots.reserve(coll.shot_count());
    for (const auto& shot : coll.shots()) shots.push_back(raw_sequence(shot, inputs_only));

    const MosaicHankel mosaic = build_mosaic_sequences(shots, order);
    const RankResult rr = rank_with_tolerance(mosaic.base, cfg);
    rep.rank = rr.rank;
    rep.verdict = rr.rank == rep.required;
    if (rep.required >= 1 && rr.singular_values.size() >= rep.required &&
        rr.singular_values.front() > 0.0)
        rep.gap = rr.singular_values[rep.required - 1] / rr.singular_values.front();

    for (const auto& seq : shots) {
        const HankelMatrix h = build_hankel(seq, order);
        rep.per_shot_ranks.push_back(rank_with_tolerance(h.base, cfg).rank);
    }
    return rep;
}

AlphaReconstruction reconstruct_alpha(const MosaicHankel& outputs, const MosaicHankel& inputs,
                                      const Trajectory& target, const ToleranceConfig& cfg) {
    if (outputs.base.cols() != inputs.base.cols())
        throw std::invalid_argument("reconstruct_alpha: mosaics disagree on column count");
    if (outputs.block_rows != inputs.block_rows)
        throw std::invalid_argument("reconstruct_alpha: mosaics disagree on depth");
    const std::size_t depth = outputs.block_rows;
    if (target.raw_length() != depth)
        throw std::invalid_argument("reconstruct_alpha: target length must equal the depth");
    if (target.output_dim() != outputs.block_size || target.input_dim() != inputs.block_size)
        throw std::invalid_argument("reconstruct_alpha: target dimensions mismatch");

    const Matrix stacked = vcat(outputs.base, inputs.base);
    std::vector<double> rhs;
    rhs.reserve(stacked.rows());
    for (std::size_t k = 0; k < depth; ++k)
        rhs.insert(rhs.end(), target.outputs()[k].begin(), target.outputs()[k].end());
    for (std::size_t k = 0; k < depth; ++k)
        rhs.insert(rhs.end(), target.inputs()[k].begin(), target.inputs()[k].end());

    const LeastSquaresResult ls = solve_min_norm(stacked, rhs, cfg);
    return {ls.solution, ls.residual};
}

Trajectory generate_admissible(const MosaicHankel& outputs, const MosaicHankel& inputs,
                               std::span<const double> alpha) {
    if (outputs.base.cols() != inputs.base.cols() || alpha.size() != outputs.base.cols())
        throw std::invalid_argument("generate_admissible: coefficient length mismatch");
    if (outputs.block_rows != inputs.block_rows)
        throw std::invalid_argument("generate_admissible: mosaics disagree on depth");

    const std::vector<double> y = multiply_vec(outputs.base, alpha);
    const std::vector<double> u = multiply_vec(inputs.base, alpha);
    const std::size_t depth = outputs.block_rows;
    std::vector<std::vector<double>> ys(depth), us(depth);
    for (std::size_t k = 0; k < depth; ++k) {
        ys[k].assign(y.begin() + k * outputs.block_size,
                     y.begin() + (k + 1) * outputs.block_size);
        us[k].assign(u.begin() + k * inputs.block_size, u.begin() + (k + 1) * inputs.block_size);
    }
    return Trajectory(std::move(us), std::move(ys));
}

}  // namespace qsr
