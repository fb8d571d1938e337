#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dspectrum {

using NodeId = std::uint32_t;

/// Tallies of what simplification removed while building a graph.
struct IngestReport {
    std::size_t edges_kept = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    std::size_t isolated_nodes = 0;

    friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

/**
 * Immutable simple undirected graph in compressed sparse row form.
 *
 * Neighbor lists are sorted, duplicate-free, loop-free and symmetric. Every node
 * carries an external string label; internal indices are dense and 0-based.
 */
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const;

    /// Throws DomainError when `v` is out of range.
    std::size_t degree(NodeId v) const;

    const std::string& label(NodeId v) const;
    std::span<const std::string> labels() const noexcept { return labels_; }
    std::optional<NodeId> find(std::string_view label) const;

    std::vector<std::size_t> degrees() const;

private:
    friend class GraphBuilder;

    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
};

struct BuildResult {
    Graph graph;
    IngestReport report;
};

/// Accumulates labelled nodes and raw edges, then simplifies them into a Graph.
class GraphBuilder {
public:
    /// Returns the existing id for `label` or appends a new node.
    NodeId add_node(std::string_view label);
    void add_edge(NodeId u, NodeId v);
    void add_edge(std::string_view u, std::string_view v) {
        const NodeId first = add_node(u);
        add_edge(first, add_node(v));
    }

    std::size_t node_count() const noexcept { return labels_.size(); }

    BuildResult build() &&;

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
};

/// Graph on nodes labelled "0".."n-1"; edges are simplified like any other ingest.
Graph make_graph(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges);

/**
 * Parses the edge-list text format: one edge per line, two whitespace-separated
 * tokens, lines whose first non-blank character is '#' ignored, blank lines skipped.
 * Nodes are numbered in order of first appearance. Throws ParseError on a line
 * that does not hold exactly two tokens.
 */
BuildResult load_edge_list(std::istream& in);
BuildResult load_edge_list(std::string_view text);
BuildResult load_edge_list_file(const std::string& path);

/// Writes every edge once as "u v". Isolated nodes have no representation in the format.
void write_edge_list(const Graph& g, std::ostream& out);

std::size_t degree(const Graph& g, NodeId v);
std::size_t max_degree(const Graph& g);

/**
 * Epidemic threshold <k>/(<k^2> - <k>) with population means over all nodes.
 * Throws DomainError("threshold undefined") when the denominator is not positive.
 */
double epidemic_threshold(const Graph& g);

}  // namespace dspectrum
