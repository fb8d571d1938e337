#include "dspectrum/graph.hpp"

#include "dspectrum/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dspectrum {

std::span<const NodeId> Graph::neighbors(NodeId v) const {
    if (v >= node_count()) {
        throw DomainError("node index " + std::to_string(v) + " out of range");
    }
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(NodeId v) const {
    return neighbors(v).size();
}

const std::string& Graph::label(NodeId v) const {
    if (v >= node_count()) {
        throw DomainError("node index " + std::to_string(v) + " out of range");
    }
    return labels_[v];
}

std::optional<NodeId> Graph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> out(node_count());
    for (std::size_t v = 0; v < out.size(); ++v) {
        out[v] = offsets_[v + 1] - offsets_[v];
    }
    return out;
}

NodeId GraphBuilder::add_node(std::string_view label) {
    auto [it, inserted] = index_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
    if (inserted) {
        labels_.emplace_back(label);
    }
    return it->second;
}

void GraphBuilder::add_edge(NodeId u, NodeId v) {
    if (u >= labels_.size() || v >= labels_.size()) {
        throw DomainError("edge endpoint out of range");
    }
    edges_.emplace_back(u, v);
}

BuildResult GraphBuilder::build() && {
    BuildResult result;
    IngestReport& report = result.report;

    std::vector<std::pair<NodeId, NodeId>> simple;
    simple.reserve(edges_.size());
    for (auto [u, v] : edges_) {
        if (u == v) {
            ++report.self_loops_dropped;
            continue;
        }
        simple.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(simple.begin(), simple.end());
    auto last = std::unique(simple.begin(), simple.end());
    report.duplicate_edges_dropped = static_cast<std::size_t>(simple.end() - last);
    simple.erase(last, simple.end());
    report.edges_kept = simple.size();

    const std::size_t n = labels_.size();
    Graph& g = result.graph;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : simple) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.offsets_[v + 1] += g.offsets_[v];
    }
    g.targets_.resize(2 * simple.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : simple) {
        g.targets_[cursor[u]++] = v;
        g.targets_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
        if (g.offsets_[v + 1] == g.offsets_[v]) {
            ++report.isolated_nodes;
        }
    }
    g.labels_ = std::move(labels_);
    g.index_ = std::move(index_);

    std::size_t degree_sum = g.offsets_[n];
    if (degree_sum != 2 * report.edges_kept) {
        throw std::logic_error("degree sum does not match twice the edge count");
    }
    return result;
}

Graph make_graph(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges) {
    GraphBuilder builder;
    for (std::size_t v = 0; v < node_count; ++v) {
        builder.add_node(std::to_string(v));
    }
    for (auto [u, v] : edges) {
        builder.add_edge(u, v);
    }
    return std::move(builder).build().graph;
}

BuildResult load_edge_list(std::istream& in) {
    GraphBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto first = line.find_first_not_of(" \t\v\f");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string a;
        std::string b;
        std::string extra;
        fields >> a >> b;
        if (b.empty() || (fields >> extra)) {
            throw ParseError(line_no, "expected exactly two node tokens");
        }
        builder.add_edge(a, b);
    }
    return std::move(builder).build();
}

BuildResult load_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_edge_list(in);
}

BuildResult load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) {
            if (u < v) {
                out << g.label(u) << ' ' << g.label(v) << '\n';
            }
        }
    }
}

std::size_t degree(const Graph& g, NodeId v) {
    return g.degree(v);
}

std::size_t max_degree(const Graph& g) {
    std::size_t best = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        best = std::max(best, g.neighbors(v).size());
    }
    return best;
}

double epidemic_threshold(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) {
        throw DomainError("threshold undefined: empty graph");
    }
    // Integer sums keep the k-regular case exact.
    std::uint64_t sum_k = 0;
    std::uint64_t sum_k2 = 0;
    for (NodeId v = 0; v < n; ++v) {
        const std::uint64_t k = g.neighbors(v).size();
        sum_k += k;
        sum_k2 += k * k;
    }
    if (sum_k2 <= sum_k) {
        throw DomainError("threshold undefined: <k^2> - <k> is not positive");
    }
    return static_cast<double>(sum_k) / static_cast<double>(sum_k2 - sum_k);
}

}  // namespace dspectrum
