#pragma once

#include <span>
#include <vector>

#include "qsr/decomp.hpp"
#include "qsr/matrix.hpp"
#include "qsr/trajectory.hpp"

namespace qsr {

// Block Hankel matrix of a vector sequence: block row i, column j holds
// sample i+j.
struct HankelMatrix {
    Matrix base;
    std::size_t block_rows = 0;
    std::size_t block_size = 0;
    std::size_t source_length = 0;
};

struct MosaicSegment {
    std::size_t first_col = 0;
    std::size_t cols = 0;
};

// Horizontal concatenation of per-shot Hankel matrices, shot order preserved.
struct MosaicHankel {
    Matrix base;
    std::vector<MosaicSegment> segments;
    std::size_t block_rows = 0;
    std::size_t block_size = 0;
};

HankelMatrix build_hankel(const std::vector<std::vector<double>>& samples,
                          std::size_t block_rows);

// Windowed data vectors: Z(k) = [y(k); u(k); ...; y(k+window); u(k+window)],
// k = 0 .. raw_length - window - 1.
std::vector<std::vector<double>> build_windowed_sequence(const Trajectory& traj,
                                                         std::size_t window);

MosaicHankel build_mosaic_sequences(const std::vector<std::vector<std::vector<double>>>& shots,
                                    std::size_t block_rows);

// Mosaic over the windowed vectors of every shot.
MosaicHankel build_mosaic(const DatasetCollection& coll, std::size_t block_rows,
                          std::size_t window);

// Mosaics over the raw sequences, used by the excitation test and the
// trajectory-reconstruction interface.
MosaicHankel input_mosaic(const DatasetCollection& coll, std::size_t block_rows);
MosaicHankel output_mosaic(const DatasetCollection& coll, std::size_t block_rows);

struct PeReport {
    bool verdict = false;
    std::size_t order = 0;
    std::size_t rank = 0;
    std::size_t required = 0;
    double gap = 0.0;  // sigma_required / sigma_max
    std::vector<std::size_t> per_shot_ranks;
};

// Collective persistent excitation of the given order: the mosaic over the
// raw inputs (or stacked input-output samples) must have full row rank.
PeReport check_collective_pe(const DatasetCollection& coll, std::size_t order, bool inputs_only,
                             const ToleranceConfig& cfg);

struct AlphaReconstruction {
    std::vector<double> alpha;
    double residual = 0.0;
};

// Minimum-norm solution of [outputs; inputs] * alpha = stacked target. A
// residual within tolerance certifies the target as admissible.
AlphaReconstruction reconstruct_alpha(const MosaicHankel& outputs, const MosaicHankel& inputs,
                                      const Trajectory& target, const ToleranceConfig& cfg);

// The trajectory spanned by the stored data at the given coefficients.
Trajectory generate_admissible(const MosaicHankel& outputs, const MosaicHankel& inputs,
                               std::span<const double> alpha);

}  // namespace qsr
