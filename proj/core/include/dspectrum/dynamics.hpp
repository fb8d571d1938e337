#pragma once

#include "dspectrum/dchain.hpp"
#include "dspectrum/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dspectrum {

using State = std::uint32_t;

/// Per-node states drawn from the chain {0, 1, ..., max_state}.
class SystemState {
public:
    SystemState() = default;
    /// Throws DomainError if any value exceeds `max_state`.
    SystemState(std::vector<State> values, State max_state);

    std::size_t size() const noexcept { return values_.size(); }
    State max_state() const noexcept { return max_state_; }
    std::span<const State> values() const noexcept { return values_; }
    State operator[](std::size_t v) const { return values_[v]; }

    void set(std::size_t v, State value);

    /// Coordinatewise order.
    bool dominated_by(const SystemState& other) const;

    friend bool operator==(const SystemState& a, const SystemState& b) { return a.values_ == b.values_; }

private:
    std::vector<State> values_;
    State max_state_ = 0;
};

/// Starting state x_v = Deg(v) over the state set {0..Δ}.
SystemState degree_state(const Graph& g);

/**
 * Local update function f(own, neighbor states). The engine hands the evaluator a
 * scratch buffer of at least neighbor_states.size() + 1 entries; contents are unspecified.
 */
class LocalRule {
public:
    using Evaluator =
        std::function<State(State own, std::span<const State> neighbor_states, std::span<std::uint32_t> scratch)>;

    LocalRule(std::string name, Evaluator evaluator) : name_(std::move(name)), eval_(std::move(evaluator)) {}

    State operator()(State own, std::span<const State> neighbor_states, std::span<std::uint32_t> scratch) const {
        return eval_(own, neighbor_states, scratch);
    }

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    Evaluator eval_;
};

/// max{k >= 0 : at least k of the states are >= k + t}, in O(len) via counting.
State offset_h_index(std::span<const State> neighbor_states, int t, std::span<std::uint32_t> scratch);

/// The [t]-system rule. It ignores the node's own state.
LocalRule t_system_rule(int t);

/// min(own, rule(...)): contractive for every argument, monotone if `rule` is.
LocalRule contractive_closure(LocalRule rule);

enum class ScheduleKind { RoundRobin, RandomFair, SingletonCyclic };

const char* to_string(ScheduleKind kind) noexcept;

/**
 * Infinite fair sequence of node subsets W_1, W_2, .... Every node appears in each
 * window of `horizon()` consecutive emissions.
 */
class UpdateSchedule {
public:
    /// `horizon` applies to RandomFair only; 0 selects the default 2n.
    UpdateSchedule(ScheduleKind kind, std::size_t node_count, std::uint64_t seed = 0, std::size_t horizon = 0);

    std::span<const NodeId> next();

    ScheduleKind kind() const noexcept { return kind_; }
    std::size_t node_count() const noexcept { return n_; }
    std::size_t horizon() const noexcept { return horizon_; }

private:
    ScheduleKind kind_;
    std::size_t n_;
    std::size_t horizon_;
    std::size_t emitted_ = 0;
    std::vector<NodeId> current_;
    std::vector<long long> last_seen_;
    std::mt19937_64 rng_;
};

UpdateSchedule make_schedule(ScheduleKind kind, std::size_t node_count, std::uint64_t seed);

/// One step of a trajectory: the nodes whose state changed and their new states.
struct TraceEvent {
    std::size_t step = 0;
    std::vector<NodeId> nodes;
    std::vector<State> states;
};

using TraceSink = std::function<void(const TraceEvent&)>;

/// Sink writing one JSON object per changing step: {"step":..,"nodes":[..],"states":[..]}.
TraceSink jsonl_trace(std::ostream& out);

struct RunOptions {
    TraceSink trace;
    /// Overrides the default budget of (n * max_state + 1) fairness horizons.
    std::optional<std::size_t> step_budget;
};

struct FixedPointResult {
    SystemState state;
    std::size_t steps = 0;
    std::size_t evaluations = 0;
    std::size_t changes = 0;
};

/**
 * Iterates [G, f, W] from `x0` until the state is a fixed point. Nodes in each W_l read
 * the previous state (synchronous within a step); nodes whose neighborhood and own state
 * are unchanged since their last evaluation are skipped.
 *
 * Throws PropertyViolation if an update raises a state (contractivity) or the step
 * budget runs out.
 */
FixedPointResult run_to_fixed_point(const Graph& g, const LocalRule& rule, UpdateSchedule& schedule,
                                    SystemState x0, const RunOptions& options = {});

/// Same fixed point via a FIFO dirty-node worklist (a fair sequential schedule).
FixedPointResult settle(const Graph& g, const LocalRule& rule, SystemState x0, const RunOptions& options = {});

/// Fixed point C^t of the [t]-system started from the degree vector.
std::vector<State> fixed_point_ranks(const Graph& g, int t);

/// Spectrum by warm-started fixed points: degrees -> C^{-Δ+1} -> ... -> C^0.
DSpectrum compute_spectrum_chained(const Graph& g, const TraceSink& trace = {});

}  // namespace dspectrum
