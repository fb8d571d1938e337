#pragma once

#include "dspectrum/graph.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace dspectrum::testing {

inline Graph from_labeled_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
    GraphBuilder builder;
    for (const auto& [u, v] : edges) {
        builder.add_edge(u, v);
    }
    return std::move(builder).build().graph;
}

/// a-b-c-... on n nodes labelled a, b, c, ...
inline Graph path(std::size_t n) {
    GraphBuilder builder;
    for (std::size_t i = 0; i < n; ++i) {
        builder.add_node(std::string(1, static_cast<char>('a' + i)));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        builder.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
    }
    return std::move(builder).build().graph;
}

inline Graph complete(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            edges.emplace_back(u, v);
        }
    }
    return make_graph(n, edges);
}

inline Graph cycle(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
    }
    return make_graph(n, edges);
}

/// Center is node 0.
inline Graph star(std::size_t leaves) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId v = 1; v <= leaves; ++v) {
        edges.emplace_back(0, v);
    }
    return make_graph(leaves + 1, edges);
}

/// Triangle a, b, c with pendant d attached to c.
inline Graph triangle_pendant() {
    return from_labeled_edges({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}});
}

inline Graph perfect_matching(std::size_t pairs) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < pairs; ++i) {
        edges.emplace_back(2 * i, 2 * i + 1);
    }
    return make_graph(2 * pairs, edges);
}

inline Graph edgeless(std::size_t n) {
    return make_graph(n, {});
}

/// G(n, p) with a platform-independent coin: 53-bit uniform from mt19937_64.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < p) {
                edges.emplace_back(u, v);
            }
        }
    }
    return make_graph(n, edges);
}

struct NamedGraph {
    std::string name;
    Graph graph;
};

inline std::vector<NamedGraph> small_named_graphs() {
    return {{"P3", path(3)},       {"P4", path(4)},
            {"K4", complete(4)},   {"star K1,3", star(3)},
            {"triangle+pendant", triangle_pendant()}};
}

/// 100 Erdos-Renyi graphs over n in {20, 50, 200} x p in {0.05, 0.1, 0.3}, plus the named graphs.
inline std::vector<NamedGraph> acceptance_corpus() {
    const std::size_t sizes[] = {20, 50, 200};
    const double probs[] = {0.05, 0.1, 0.3};
    std::vector<NamedGraph> out;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t n = sizes[(i / 3) % 3];
        const double p = probs[i % 3];
        out.push_back({"ER(" + std::to_string(n) + "," + std::to_string(p).substr(0, 4) + ")#" + std::to_string(i),
                       erdos_renyi(n, p, 1000 + i)});
    }
    for (auto& g : small_named_graphs()) {
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace dspectrum::testing
