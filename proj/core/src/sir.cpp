#include "dspectrum/sir.hpp"

#include "dspectrum/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace dspectrum {

namespace {

/// Success iff the next word is below floor(p * 2^32); p >= 1 never draws.
class Bernoulli {
public:
    explicit Bernoulli(double p)
        : always_(p >= 1.0),
          threshold_(p <= 0.0 ? 0 : always_ ? 0 : static_cast<std::uint32_t>(std::ldexp(p, 32))) {}

    bool operator()(CounterStream& rng) const { return always_ || rng.next() < threshold_; }

private:
    bool always_;
    std::uint32_t threshold_;
};

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("transmission probability must lie in [0, 1]");
    }
}

}  // namespace

SirSimulator::SirSimulator(const Graph& g) : g_(g), stamp_(g.node_count(), 0) {}

std::size_t SirSimulator::run(NodeId source, double p, CounterStream& rng) {
    if (source >= g_.node_count()) {
        throw DomainError("source index out of range");
    }
    check_probability(p);
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    const Bernoulli transmit(p);
    // A stamped node is infected or recovered; only unstamped nodes are susceptible.
    stamp_[source] = epoch_;
    frontier_.assign(1, source);
    std::size_t recovered = 0;
    while (!frontier_.empty()) {
        next_.clear();
        for (NodeId v : frontier_) {
            for (NodeId u : g_.neighbors(v)) {
                if (stamp_[u] != epoch_ && transmit(rng)) {
                    stamp_[u] = epoch_;
                    next_.push_back(u);
                }
            }
        }
        recovered += frontier_.size();
        frontier_.swap(next_);
    }
    return recovered;
}

std::size_t simulate_once(const Graph& g, NodeId source, double p, CounterStream& rng) {
    SirSimulator sim(g);
    return sim.run(source, p, rng);
}

CounterStream sir_stream(std::uint64_t seed, NodeId source, std::size_t slot, std::uint32_t run) {
    return CounterStream(seed, source, static_cast<std::uint32_t>(slot), run);
}

namespace {

std::uint64_t total_recovered(SirSimulator& sim, NodeId source, double p, const SirParams& params,
                              std::size_t slot) {
    std::uint64_t total = 0;
    for (std::uint32_t r = 0; r < params.runs_per_source; ++r) {
        CounterStream rng = sir_stream(params.seed, source, slot, r);
        total += sim.run(source, p, rng);
    }
    return total;
}

double as_rate(std::uint64_t total, std::uint32_t runs, std::size_t n) {
    return static_cast<double>(total) / (static_cast<double>(runs) * static_cast<double>(n));
}

}  // namespace

double infection_rate(const Graph& g, NodeId source, double p, const SirParams& params, std::size_t slot) {
    if (params.runs_per_source == 0) {
        throw DomainError("runs_per_source must be positive");
    }
    SirSimulator sim(g);
    return as_rate(total_recovered(sim, source, p, params, slot), params.runs_per_source, g.node_count());
}

ProfileSet profile_all_nodes(const Graph& g, std::span<const double> multipliers, const SirParams& params) {
    if (params.runs_per_source == 0) {
        throw DomainError("runs_per_source must be positive");
    }
    ProfileSet out;
    out.beta = epidemic_threshold(g);
    out.multipliers.assign(multipliers.begin(), multipliers.end());
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        double p = multipliers[i] * out.beta;
        if (p > 1.0) {
            out.clamped.push_back(i);
            p = 1.0;
        }
        check_probability(p);
        out.probabilities.push_back(p);
    }

    const std::size_t n = g.node_count();
    out.profiles.resize(n);
    std::atomic<std::size_t> next_source{0};
    auto worker = [&] {
        SirSimulator sim(g);
        for (std::size_t v = next_source++; v < n; v = next_source++) {
            InfectionProfile& profile = out.profiles[v];
            profile.node = static_cast<NodeId>(v);
            profile.beta = out.beta;
            profile.rates.resize(out.probabilities.size());
            for (std::size_t slot = 0; slot < out.probabilities.size(); ++slot) {
                std::uint64_t total =
                    total_recovered(sim, static_cast<NodeId>(v), out.probabilities[slot], params, slot);
                profile.rates[slot] = as_rate(total, params.runs_per_source, n);
            }
        }
    };

    std::size_t workers = params.workers != 0 ? params.workers : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    return out;
}

}  // namespace dspectrum
