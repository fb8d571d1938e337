#include "dspectrum/dchain.hpp"

#include "dspectrum/errors.hpp"

#include <algorithm>
#include <deque>

namespace dspectrum {

DSpectrum::DSpectrum(std::size_t node_count, std::size_t delta)
    : node_count_(node_count), delta_(delta), data_(node_count * (delta + 1), 0) {}

std::vector<Rank> DSpectrum::column(std::size_t c) const {
    std::vector<Rank> out(node_count_);
    for (std::size_t v = 0; v < node_count_; ++v) {
        out[v] = data_[v * column_count() + c];
    }
    return out;
}

void DSpectrum::set_column(std::size_t c, std::span<const Rank> values) {
    if (c >= column_count() || values.size() != node_count_) {
        throw DomainError("spectrum column shape mismatch");
    }
    for (std::size_t v = 0; v < node_count_; ++v) {
        data_[v * column_count() + c] = values[v];
    }
}

namespace {

std::vector<NodeId> alive_nodes(const std::vector<char>& alive) {
    std::vector<NodeId> out;
    for (std::size_t v = 0; v < alive.size(); ++v) {
        if (alive[v]) {
            out.push_back(static_cast<NodeId>(v));
        }
    }
    return out;
}

}  // namespace

std::vector<NodeId> chain_level(const Graph& g, int t, std::size_t k) {
    if (t >= 0) {
        throw DomainError("chain_level requires t < 0; use core_peel for t = 0");
    }
    if (k == 0) {
        throw DomainError("chain_level requires k >= 1");
    }
    const std::size_t step = static_cast<std::size_t>(-static_cast<long long>(t));
    const std::size_t residue = (k - 1) % step + 1;
    const std::size_t rounds = (k - residue) / step;

    const std::size_t n = g.node_count();
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> deg(n);
    for (std::size_t j = 0; j <= rounds; ++j) {
        const std::size_t threshold = residue + j * step;
        for (NodeId v = 0; v < n; ++v) {
            if (!alive[v]) {
                continue;
            }
            deg[v] = 0;
            for (NodeId u : g.neighbors(v)) {
                deg[v] += alive[u] ? 1 : 0;
            }
        }
        for (NodeId v = 0; v < n; ++v) {
            if (alive[v] && deg[v] < threshold) {
                alive[v] = 0;
            }
        }
    }
    return alive_nodes(alive);
}

std::vector<NodeId> core_peel(const Graph& g, std::size_t k) {
    const std::size_t n = g.node_count();
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> deg = g.degrees();
    std::deque<NodeId> pending;
    for (NodeId v = 0; v < n; ++v) {
        if (deg[v] < k) {
            alive[v] = 0;
            pending.push_back(v);
        }
    }
    while (!pending.empty()) {
        NodeId v = pending.front();
        pending.pop_front();
        for (NodeId u : g.neighbors(v)) {
            if (alive[u] && --deg[u] < k) {
                alive[u] = 0;
                pending.push_back(u);
            }
        }
    }
    return alive_nodes(alive);
}

std::vector<Rank> core_numbers(const Graph& g) {
    // Batagelj-Zaversnik bucket peeling.
    const std::size_t n = g.node_count();
    std::vector<Rank> deg(n);
    Rank max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = static_cast<Rank>(g.neighbors(v).size());
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (Rank d : deg) {
        ++bin[d];
    }
    std::size_t start = 0;
    for (auto& b : bin) {
        std::size_t count = b;
        b = start;
        start += count;
    }
    std::vector<NodeId> vert(n);
    std::vector<std::size_t> pos(n);
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d > 0; --d) {
        bin[d] = bin[d - 1];
    }
    if (!bin.empty()) {
        bin[0] = 0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        NodeId v = vert[i];
        for (NodeId u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                Rank du = deg[u];
                std::size_t pu = pos[u];
                std::size_t pw = bin[du];
                NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return deg;
}

ChainRanks ranks_for_order(const Graph& g, int t) {
    if (t > 0) {
        throw DomainError("ranks_for_order requires t <= 0");
    }
    ChainRanks out{t, {}};
    if (t == 0) {
        out.ranks = core_numbers(g);
        return out;
    }

    const std::size_t n = g.node_count();
    const std::size_t delta = max_degree(g);
    const std::size_t step = static_cast<std::size_t>(-static_cast<long long>(t));
    out.ranks.assign(n, 0);

    // Levels above Δ are empty, so residues beyond Δ+1 contribute nothing.
    const std::size_t residues = std::min(step, delta + 1);
    const std::vector<std::size_t> base_degree = g.degrees();
    std::vector<char> alive(n);
    std::vector<std::size_t> deg(n);
    std::vector<NodeId> members;
    std::vector<NodeId> removed;

    for (std::size_t residue = 1; residue <= residues; ++residue) {
        std::fill(alive.begin(), alive.end(), 1);
        deg = base_degree;
        members.resize(n);
        for (NodeId v = 0; v < n; ++v) {
            members[v] = v;
        }
        // One simultaneous pass per level: thresholds refer to the predecessor graph.
        for (std::size_t level = residue; level <= delta + 1 && !members.empty(); level += step) {
            removed.clear();
            std::erase_if(members, [&](NodeId v) {
                if (deg[v] < level) {
                    removed.push_back(v);
                    return true;
                }
                return false;
            });
            for (NodeId v : removed) {
                alive[v] = 0;
            }
            for (NodeId v : removed) {
                for (NodeId u : g.neighbors(v)) {
                    if (alive[u]) {
                        --deg[u];
                    }
                }
            }
            for (NodeId v : members) {
                out.ranks[v] = std::max<Rank>(out.ranks[v], static_cast<Rank>(level));
            }
        }
    }
    return out;
}

DSpectrum full_spectrum(const Graph& g) {
    const std::size_t delta = max_degree(g);
    DSpectrum spectrum(g.node_count(), delta);
    for (std::size_t c = 0; c <= delta; ++c) {
        spectrum.set_column(c, ranks_for_order(g, DSpectrum::order_of_column(c)).ranks);
    }
    return spectrum;
}

DChain chain_from_ranks(const ChainRanks& ranks) {
    Rank top = 0;
    for (Rank r : ranks.ranks) {
        top = std::max(top, r);
    }
    DChain chain{ranks.order, std::vector<std::vector<NodeId>>(top + 1)};
    for (std::size_t v = 0; v < ranks.ranks.size(); ++v) {
        for (Rank i = 0; i <= ranks.ranks[v]; ++i) {
            chain.levels[i].push_back(static_cast<NodeId>(v));
        }
    }
    return chain;
}

const char* to_string(ChainViolation::Kind kind) noexcept {
    switch (kind) {
    case ChainViolation::Kind::Shape:
        return "shape";
    case ChainViolation::Kind::Nesting:
        return "nesting";
    case ChainViolation::Kind::Degree:
        return "degree";
    case ChainViolation::Kind::Maximality:
        return "maximality";
    }
    return "unknown";
}

ChainVerdict verify_chain(const Graph& g, const DChain& chain) {
    using Kind = ChainViolation::Kind;
    if (chain.order > 0) {
        throw DomainError("D-chains are defined for t <= 0");
    }
    auto fail = [](Kind kind, std::size_t level, std::optional<NodeId> node, std::string message) {
        return ChainVerdict{ChainViolation{kind, level, node, std::move(message)}};
    };

    const std::size_t n = g.node_count();
    const auto& levels = chain.levels;
    if (levels.empty()) {
        return fail(Kind::Shape, 0, std::nullopt, "chain has no levels");
    }
    if (levels[0].size() != n) {
        return fail(Kind::Shape, 0, std::nullopt, "level 0 must contain every node");
    }

    const std::size_t top = levels.size() - 1;
    // member[i][v]: v in S_i; the extra row is the empty level K+1.
    std::vector<std::vector<char>> member(top + 2, std::vector<char>(n, 0));
    for (std::size_t i = 0; i <= top; ++i) {
        if (levels[i].empty() && n > 0) {
            return fail(Kind::Shape, i, std::nullopt, "level " + std::to_string(i) + " is empty");
        }
        for (NodeId v : levels[i]) {
            if (v >= n) {
                return fail(Kind::Shape, i, v, "node id out of range");
            }
            if (member[i][v]) {
                return fail(Kind::Shape, i, v, "node listed twice");
            }
            member[i][v] = 1;
        }
    }

    for (std::size_t i = 1; i <= top; ++i) {
        for (NodeId v : levels[i]) {
            if (!member[i - 1][v]) {
                return fail(Kind::Nesting, i, v,
                            "node " + std::to_string(v) + " in level " + std::to_string(i) +
                                " but not in level " + std::to_string(i - 1));
            }
        }
    }

    auto referenced = [&](std::size_t i) -> const std::vector<char>& {
        long long j = static_cast<long long>(i) + chain.order;
        return member[static_cast<std::size_t>(std::max(0LL, j))];
    };
    auto count_in = [&](NodeId v, const std::vector<char>& set) {
        std::size_t c = 0;
        for (NodeId u : g.neighbors(v)) {
            c += set[u] ? 1 : 0;
        }
        return c;
    };

    for (std::size_t i = 1; i <= top; ++i) {
        const auto& ref = referenced(i);
        for (NodeId v : levels[i]) {
            std::size_t c = count_in(v, ref);
            if (c < i) {
                return fail(Kind::Degree, i, v,
                            "node " + std::to_string(v) + " in level " + std::to_string(i) + " has " +
                                std::to_string(c) + " neighbors in level " +
                                std::to_string(std::max(0LL, static_cast<long long>(i) + chain.order)));
            }
        }
    }

    auto not_maximal = [&](std::size_t i, NodeId u) {
        return fail(Kind::Maximality, i, u, "node " + std::to_string(u) + " could be added to level " + std::to_string(i));
    };
    if (chain.order < 0) {
        // S_i does not reference itself, so adding u changes only u's own condition.
        for (std::size_t i = 1; i <= top + 1; ++i) {
            const auto& ref = referenced(i);
            for (NodeId u = 0; u < n; ++u) {
                if (member[i - 1][u] && !member[i][u] && count_in(u, ref) >= i) {
                    return not_maximal(i, u);
                }
            }
        }
        return {};
    }

    // t = 0: S_i must contain the whole i-core of G[S_{i-1}].
    std::vector<char> alive;
    std::vector<std::size_t> deg(n);
    std::vector<NodeId> queue;
    for (std::size_t i = 1; i <= top + 1; ++i) {
        alive = member[i - 1];
        queue.clear();
        for (NodeId u = 0; u < n; ++u) {
            deg[u] = alive[u] ? count_in(u, alive) : 0;
        }
        for (NodeId u = 0; u < n; ++u) {
            if (alive[u] && deg[u] < i) {
                alive[u] = 0;
                queue.push_back(u);
            }
        }
        while (!queue.empty()) {
            const NodeId u = queue.back();
            queue.pop_back();
            for (NodeId w : g.neighbors(u)) {
                if (alive[w] && --deg[w] < i) {
                    alive[w] = 0;
                    queue.push_back(w);
                }
            }
        }
        for (NodeId u = 0; u < n; ++u) {
            if (alive[u] && !member[i][u]) {
                return not_maximal(i, u);
            }
        }
    }
    return {};
}

}  // namespace dspectrum
