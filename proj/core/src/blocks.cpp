#include "dspectrum/blocks.hpp"

#include "dspectrum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace dspectrum {

const char* to_string(PartitionKind kind) noexcept {
    switch (kind) {
    case PartitionKind::DBlock:
        return "D-block";
    case PartitionKind::CBlock:
        return "C-block";
    case PartitionKind::SpreadingPower:
        return "spreading-power";
    }
    return "unknown";
}

std::vector<std::size_t> BlockPartition::sizes() const {
    std::vector<std::size_t> out(block_count, 0);
    for (std::size_t b : assignment) {
        ++out[b];
    }
    return out;
}

std::vector<std::vector<NodeId>> BlockPartition::members() const {
    std::vector<std::vector<NodeId>> out(block_count);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        out[assignment[v]].push_back(static_cast<NodeId>(v));
    }
    return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::size_t nearest(std::span<const double> point, const std::vector<std::vector<double>>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(point, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

double wcss(std::span<const std::vector<double>> rows, const std::vector<std::size_t>& assignment,
            const std::vector<std::vector<double>>& centers) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        total += squared_distance(rows[i], centers[assignment[i]]);
    }
    return total;
}

}  // namespace

Clustering kmeans(std::span<const std::vector<double>> rows, std::size_t k, std::uint64_t seed, PartitionKind kind) {
    const std::size_t n = rows.size();
    if (k == 0 || n == 0) {
        throw DomainError("k-means needs k >= 1 and at least one row");
    }
    const std::size_t dim = rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != dim) {
            throw DomainError("rows have inconsistent dimension");
        }
    }

    Clustering out;
    out.requested_k = k;
    const std::size_t distinct = std::set<std::vector<double>>(rows.begin(), rows.end()).size();
    k = std::min(k, distinct);

    // Farthest-point seeding.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centers;
    centers.push_back(rows[rng() % n]);
    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        min_dist[i] = squared_distance(rows[i], centers[0]);
    }
    while (centers.size() < k) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (min_dist[i] > min_dist[pick]) {
                pick = i;
            }
        }
        centers.push_back(rows[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], squared_distance(rows[i], centers.back()));
        }
    }

    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
        assignment[i] = nearest(rows[i], centers);
    }
    out.initial_wcss = wcss(rows, assignment, centers);

    for (std::size_t iter = 0; iter < kKMeansMaxIterations; ++iter) {
        out.iterations = iter + 1;
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assignment[i]];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[assignment[i]][d] += rows[i][d];
            }
        }
        // An emptied cluster takes over the point farthest from its own center.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assignment[i]] < 2) {
                    continue;
                }
                const double d = squared_distance(rows[i], centers[assignment[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == n) {
                continue;
            }
            std::size_t from = assignment[far];
            --counts[from];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[from][d] -= rows[far][d];
            }
            assignment[far] = c;
            counts[c] = 1;
            sums[c] = rows[far];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            std::vector<double> mean(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                mean[d] = sums[c][d] / static_cast<double>(counts[c]);
            }
            shift = std::max(shift, std::sqrt(squared_distance(mean, centers[c])));
            centers[c] = std::move(mean);
        }
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = nearest(rows[i], centers);
            if (best != assignment[i]) {
                assignment[i] = best;
                moved = true;
            }
        }
        if (!moved && shift < kKMeansTolerance) {
            break;
        }
    }
    out.final_wcss = wcss(rows, assignment, centers);

    std::vector<std::size_t> relabel(k, k);
    std::size_t next_id = 0;
    for (auto& a : assignment) {
        if (relabel[a] == k) {
            relabel[a] = next_id++;
        }
        a = relabel[a];
    }
    out.partition = BlockPartition{kind, std::move(assignment), next_id};
    return out;
}

Clustering cluster_spectra(const DSpectrum& spectra, std::size_t k, std::uint64_t seed, bool standardize) {
    const std::size_t n = spectra.node_count();
    const std::size_t cols = spectra.column_count();
    std::vector<std::vector<double>> rows(n, std::vector<double>(cols));
    for (NodeId v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < cols; ++c) {
            rows[v][c] = spectra.at(v, c);
        }
    }
    if (standardize && n > 0) {
        for (std::size_t c = 0; c < cols; ++c) {
            double mean = 0.0;
            for (const auto& r : rows) {
                mean += r[c];
            }
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (const auto& r : rows) {
                var += (r[c] - mean) * (r[c] - mean);
            }
            const double sd = std::sqrt(var / static_cast<double>(n));
            for (auto& r : rows) {
                r[c] = sd > 0.0 ? (r[c] - mean) / sd : 0.0;
            }
        }
    }
    return kmeans(rows, k, seed, PartitionKind::DBlock);
}

Clustering cluster_spreading_power(std::span<const InfectionProfile> profiles, std::size_t k, std::uint64_t seed) {
    std::vector<std::vector<double>> rows;
    rows.reserve(profiles.size());
    for (const auto& p : profiles) {
        rows.push_back(p.rates);
    }
    return kmeans(rows, k, seed, PartitionKind::SpreadingPower);
}

BlockPartition cblocks(const DSpectrum& spectra) {
    const std::vector<Rank> cores = spectra.column(0);
    std::map<Rank, std::size_t> ids;
    for (Rank c : cores) {
        ids.emplace(c, 0);
    }
    std::size_t next_id = 0;
    for (auto& [core, id] : ids) {
        id = next_id++;
    }
    BlockPartition out{PartitionKind::CBlock, std::vector<std::size_t>(cores.size()), ids.size()};
    for (std::size_t v = 0; v < cores.size(); ++v) {
        out.assignment[v] = ids[cores[v]];
    }
    return out;
}

std::optional<double> dispersion(std::span<const double> values) {
    if (values.size() < 2) {
        return std::nullopt;
    }
    const double count = static_cast<double>(values.size());
    double mean = 0.0;
    for (double x : values) {
        mean += x;
    }
    mean /= count;
    if (mean == 0.0) {
        return std::nullopt;
    }
    double var = 0.0;
    for (double x : values) {
        var += (x - mean) * (x - mean);
    }
    var /= count;
    return var / mean;
}

namespace {

std::vector<double> gather(std::span<const double> rates, const std::vector<NodeId>& members) {
    std::vector<double> out;
    out.reserve(members.size());
    for (NodeId v : members) {
        out.push_back(rates[v]);
    }
    return out;
}

void check_same_nodes(const BlockPartition& a, const BlockPartition& b) {
    if (a.node_count() != b.node_count()) {
        throw DomainError("partitions cover different node sets");
    }
}

}  // namespace

ICellGrid icell_grid(const BlockPartition& cb, const BlockPartition& db, std::span<const double> rates,
                     std::string rate_label) {
    check_same_nodes(cb, db);
    if (rates.size() != cb.node_count()) {
        throw DomainError("rate vector does not match partition size");
    }
    ICellGrid grid{cb.block_count, db.block_count, std::move(rate_label),
                   std::vector<ICell>(cb.block_count * db.block_count)};
    for (std::size_t v = 0; v < cb.node_count(); ++v) {
        grid.cells[cb.assignment[v] * grid.cols + db.assignment[v]].members.push_back(static_cast<NodeId>(v));
    }
    for (auto& cell : grid.cells) {
        if (cell.members.empty()) {
            continue;
        }
        auto values = gather(rates, cell.members);
        double sum = 0.0;
        for (double x : values) {
            sum += x;
        }
        cell.mean = sum / static_cast<double>(values.size());
        cell.dispersion = dispersion(values);
    }
    return grid;
}

std::optional<double> DispersionReport::refined_fraction() const {
    if (multi_cell_blocks == 0) {
        return std::nullopt;
    }
    return static_cast<double>(refined_blocks) / static_cast<double>(multi_cell_blocks);
}

DispersionReport dispersion_report(const ICellGrid& grid, const BlockPartition& cb, std::span<const double> rates) {
    if (grid.rows != cb.block_count || rates.size() != cb.node_count()) {
        throw DomainError("grid, partition and rates disagree in shape");
    }
    DispersionReport report;
    const auto members = cb.members();
    for (std::size_t r = 0; r < grid.rows; ++r) {
        CBlockDispersion row;
        row.cblock = r;
        row.size = members[r].size();
        row.global = dispersion(gather(rates, members[r]));
        double sum = 0.0;
        std::size_t defined = 0;
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const ICell& cell = grid.at(r, c);
            if (cell.members.empty()) {
                continue;
            }
            row.cell_columns.push_back(c);
            row.cell_dispersions.push_back(cell.dispersion);
            if (cell.dispersion) {
                sum += *cell.dispersion;
                ++defined;
            }
        }
        if (defined > 0) {
            row.mean_cell_dispersion = sum / static_cast<double>(defined);
        }
        if (row.cell_columns.size() >= 2 && row.global && row.mean_cell_dispersion) {
            ++report.multi_cell_blocks;
            if (*row.mean_cell_dispersion <= *row.global) {
                ++report.refined_blocks;
            }
        }
        report.blocks.push_back(std::move(row));
    }
    return report;
}

std::vector<std::vector<std::size_t>> contingency(const BlockPartition& a, const BlockPartition& b) {
    check_same_nodes(a, b);
    std::vector<std::vector<std::size_t>> counts(a.block_count, std::vector<std::size_t>(b.block_count, 0));
    for (std::size_t v = 0; v < a.node_count(); ++v) {
        ++counts[a.assignment[v]][b.assignment[v]];
    }
    return counts;
}

}  // namespace dspectrum
