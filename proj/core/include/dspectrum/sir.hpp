#pragma once

#include "dspectrum/graph.hpp"
#include "dspectrum/philox.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dspectrum {

/// The multiplier grid h applied to the epidemic threshold.
inline const std::vector<double> kDefaultMultipliers{0.1, 0.5, 1, 1.5, 2, 4, 6, 8, 10};

struct SirParams {
    /// Infected nodes recover after exactly one step.
    static constexpr double recovery_prob = 1.0;

    double transmission_prob = 0.0;
    std::uint32_t runs_per_source = 1000;
    std::uint64_t seed = 42;
    /// Worker threads for profiling; 0 selects std::thread::hardware_concurrency().
    std::size_t workers = 0;
};

struct InfectionProfile {
    NodeId node = 0;
    std::vector<double> rates;
    double beta = 0.0;
};

struct ProfileSet {
    double beta = 0.0;
    std::vector<double> multipliers;
    /// min(1, h * beta) per multiplier.
    std::vector<double> probabilities;
    /// Multiplier indices where h * beta exceeded 1.
    std::vector<std::size_t> clamped;
    std::vector<InfectionProfile> profiles;
};

/**
 * Reusable buffers for one SIR cascade at a time. Not thread-safe; use one per worker.
 */
class SirSimulator {
public:
    explicit SirSimulator(const Graph& g);

    /// Runs one cascade and returns the number of recovered nodes at extinction.
    std::size_t run(NodeId source, double p, CounterStream& rng);

private:
    const Graph& g_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<NodeId> frontier_;
    std::vector<NodeId> next_;
};

/**
 * Discrete-time SIR from a single infected source with recovery probability 1: every
 * infected node gets one chance to infect each susceptible neighbor with probability p.
 */
std::size_t simulate_once(const Graph& g, NodeId source, double p, CounterStream& rng);

/// Stream for run `run` of `source` in multiplier slot `slot`.
CounterStream sir_stream(std::uint64_t seed, NodeId source, std::size_t slot, std::uint32_t run);

/**
 * Mean of recovered/n over params.runs_per_source cascades from `source` at probability p.
 * `slot` selects the RNG stream family (the multiplier index in profiling).
 */
double infection_rate(const Graph& g, NodeId source, double p, const SirParams& params, std::size_t slot = 0);

/**
 * Infection rate of every node at each probability min(1, h * beta). Output is a pure
 * function of (graph, multipliers, runs, seed), independent of the worker count.
 * Throws DomainError when the epidemic threshold is undefined.
 */
ProfileSet profile_all_nodes(const Graph& g, std::span<const double> multipliers, const SirParams& params);

}  // namespace dspectrum
