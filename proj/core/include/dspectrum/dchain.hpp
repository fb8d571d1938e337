#pragma once

#include "dspectrum/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dspectrum {

using Rank = std::uint32_t;

/// Ranks C_t(v) of every node in the maximal D-chain of one order t <= 0.
struct ChainRanks {
    int order = 0;
    std::vector<Rank> ranks;

    friend bool operator==(const ChainRanks&, const ChainRanks&) = default;
};

/**
 * A D-chain of order t: S_0 = V ⊇ S_1 ⊇ ... ⊇ S_K, where every node of S_i has at
 * least i neighbors in S_max(0, i+t). Levels hold sorted node ids.
 */
struct DChain {
    int order = 0;
    std::vector<std::vector<NodeId>> levels;
};

/**
 * Per-node D-spectra as an n x (Δ+1) matrix. Column c holds C_{-c}, so column 0 is
 * the core number and column Δ the degree.
 */
class DSpectrum {
public:
    DSpectrum() = default;
    DSpectrum(std::size_t node_count, std::size_t delta);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t delta() const noexcept { return delta_; }
    std::size_t column_count() const noexcept { return delta_ + 1; }

    static int order_of_column(std::size_t column) noexcept { return -static_cast<int>(column); }

    Rank at(NodeId v, std::size_t column) const { return data_[v * column_count() + column]; }
    Rank& at(NodeId v, std::size_t column) { return data_[v * column_count() + column]; }

    std::span<const Rank> row(NodeId v) const {
        return {data_.data() + v * column_count(), column_count()};
    }
    std::vector<Rank> column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const Rank> values);

    friend bool operator==(const DSpectrum&, const DSpectrum&) = default;

private:
    std::size_t node_count_ = 0;
    std::size_t delta_ = 0;
    std::vector<Rank> data_;
};

/**
 * Node set of level k of the maximal D-chain of order t < 0, by the deletion procedure:
 * write k = i + m(-t) with 1 <= i <= -t, then for j = 0..m delete, in one simultaneous
 * pass, every node whose degree in the current graph is below i + j(-t).
 */
std::vector<NodeId> chain_level(const Graph& g, int t, std::size_t k);

/// Classical k-core by cascading deletion. Returned ids are sorted.
std::vector<NodeId> core_peel(const Graph& g, std::size_t k);

/// Core numbers by bucket peeling, O(n + m).
std::vector<Rank> core_numbers(const Graph& g);

/// C_t for every node. Throws DomainError for t > 0.
ChainRanks ranks_for_order(const Graph& g, int t);

DSpectrum full_spectrum(const Graph& g);

/// Rebuilds the chain S_i = {v : rank(v) >= i}, i = 0..max rank.
DChain chain_from_ranks(const ChainRanks& ranks);

struct ChainViolation {
    enum class Kind { Shape, Nesting, Degree, Maximality };

    Kind kind;
    std::size_t level;
    std::optional<NodeId> node;
    std::string message;
};

struct ChainVerdict {
    std::optional<ChainViolation> violation;

    bool valid() const noexcept { return !violation.has_value(); }
};

/**
 * Definition-level check of a claimed maximal D-chain: level shape, nesting, the
 * degree condition, and local maximality: for i = 1..K+1 no node of S_{i-1} \ S_i
 * could join S_i while keeping the degree condition. For t = 0, where S_i references
 * itself, S_i must contain the i-core of G[S_{i-1}].
 */
ChainVerdict verify_chain(const Graph& g, const DChain& chain);

const char* to_string(ChainViolation::Kind kind) noexcept;

}  // namespace dspectrum
