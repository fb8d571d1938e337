#pragma once

#include "dspectrum/dchain.hpp"
#include "dspectrum/graph.hpp"
#include "dspectrum/sir.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dspectrum {

enum class PartitionKind { DBlock, CBlock, SpreadingPower };

const char* to_string(PartitionKind kind) noexcept;

/// Assignment of every node to one of block_count dense, non-empty blocks.
struct BlockPartition {
    PartitionKind kind = PartitionKind::DBlock;
    std::vector<std::size_t> assignment;
    std::size_t block_count = 0;

    std::size_t node_count() const noexcept { return assignment.size(); }
    std::vector<std::size_t> sizes() const;
    std::vector<std::vector<NodeId>> members() const;
};

struct Clustering {
    BlockPartition partition;
    std::size_t requested_k = 0;
    std::size_t iterations = 0;
    /// Within-cluster sum of squares at the seeded centers and after the last iteration.
    double initial_wcss = 0.0;
    double final_wcss = 0.0;

    bool reduced() const noexcept { return partition.block_count < requested_k; }
};

inline constexpr std::size_t kKMeansMaxIterations = 200;
inline constexpr double kKMeansTolerance = 1e-9;

/**
 * Lloyd's k-means on the rows with Euclidean distance. Centers are seeded by a
 * seed-chosen first row followed by greedy farthest-point picks (ties to the lower
 * row). Assignment ties go to the lower center. k larger than the number of distinct
 * rows is reduced to that number. Block ids are renumbered by first appearance.
 */
Clustering kmeans(std::span<const std::vector<double>> rows, std::size_t k, std::uint64_t seed, PartitionKind kind);

/// D-blocks: k-means over spectrum rows, optionally z-scored per column.
Clustering cluster_spectra(const DSpectrum& spectra, std::size_t k, std::uint64_t seed, bool standardize = false);

/// Spreading-power blocks: k-means over the per-node rate vectors.
Clustering cluster_spreading_power(std::span<const InfectionProfile> profiles, std::size_t k, std::uint64_t seed);

/// C-blocks: one block per distinct core number, ids in ascending core order.
BlockPartition cblocks(const DSpectrum& spectra);

/// Variance-to-mean ratio with population variance; nullopt for < 2 values or zero mean.
std::optional<double> dispersion(std::span<const double> values);

struct ICell {
    std::vector<NodeId> members;
    std::optional<double> mean;
    std::optional<double> dispersion;
};

/// Intersections of C-blocks (rows) with D-blocks (columns).
struct ICellGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string rate_label;
    std::vector<ICell> cells;

    const ICell& at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
};

ICellGrid icell_grid(const BlockPartition& cb, const BlockPartition& db, std::span<const double> rates,
                     std::string rate_label);

struct CBlockDispersion {
    std::size_t cblock = 0;
    std::size_t size = 0;
    std::optional<double> global;
    /// Non-empty cells of the row, by D-block id.
    std::vector<std::size_t> cell_columns;
    std::vector<std::optional<double>> cell_dispersions;
    /// Mean over the defined cell dispersions.
    std::optional<double> mean_cell_dispersion;
};

struct DispersionReport {
    std::vector<CBlockDispersion> blocks;
    /// C-blocks refined into >= 2 cells with both dispersions defined.
    std::size_t multi_cell_blocks = 0;
    /// Of those, how many have mean cell dispersion <= global dispersion.
    std::size_t refined_blocks = 0;

    std::optional<double> refined_fraction() const;
};

DispersionReport dispersion_report(const ICellGrid& grid, const BlockPartition& cb, std::span<const double> rates);

/// counts[i][j] = |block i of a ∩ block j of b|.
std::vector<std::vector<std::size_t>> contingency(const BlockPartition& a, const BlockPartition& b);

}  // namespace dspectrum
