#include "dspectrum/dynamics.hpp"

#include "dspectrum/errors.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include <json.hpp>

namespace dspectrum {

SystemState::SystemState(std::vector<State> values, State max_state)
    : values_(std::move(values)), max_state_(max_state) {
    for (State s : values_) {
        if (s > max_state_) {
            throw DomainError("state " + std::to_string(s) + " exceeds max state " + std::to_string(max_state_));
        }
    }
}

void SystemState::set(std::size_t v, State value) {
    if (value > max_state_) {
        throw DomainError("state exceeds max state");
    }
    values_.at(v) = value;
}

bool SystemState::dominated_by(const SystemState& other) const {
    if (other.size() != size()) {
        return false;
    }
    for (std::size_t v = 0; v < size(); ++v) {
        if (values_[v] > other.values_[v]) {
            return false;
        }
    }
    return true;
}

SystemState degree_state(const Graph& g) {
    std::vector<State> values(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        values[v] = static_cast<State>(g.neighbors(v).size());
    }
    return SystemState(std::move(values), static_cast<State>(max_degree(g)));
}

State offset_h_index(std::span<const State> neighbor_states, int t, std::span<std::uint32_t> scratch) {
    // With a_u = state_u - t the condition reads #{a_u >= k} >= k, capped at the degree.
    const std::size_t deg = neighbor_states.size();
    std::fill_n(scratch.begin(), deg + 1, 0u);
    for (State s : neighbor_states) {
        long long a = static_cast<long long>(s) - t;
        if (a <= 0) {
            continue;
        }
        ++scratch[std::min<std::size_t>(static_cast<std::size_t>(a), deg)];
    }
    std::size_t at_least = 0;
    for (std::size_t k = deg; k > 0; --k) {
        at_least += scratch[k];
        if (at_least >= k) {
            return static_cast<State>(k);
        }
    }
    return 0;
}

LocalRule t_system_rule(int t) {
    return LocalRule("[" + std::to_string(t) + "]-system",
                     [t](State, std::span<const State> nbrs, std::span<std::uint32_t> scratch) {
                         return offset_h_index(nbrs, t, scratch);
                     });
}

LocalRule contractive_closure(LocalRule rule) {
    std::string name = "min(own, " + rule.name() + ")";
    return LocalRule(std::move(name),
                     [inner = std::move(rule)](State own, std::span<const State> nbrs, std::span<std::uint32_t> scratch) {
                         return std::min(own, inner(own, nbrs, scratch));
                     });
}

const char* to_string(ScheduleKind kind) noexcept {
    switch (kind) {
    case ScheduleKind::RoundRobin:
        return "round-robin";
    case ScheduleKind::RandomFair:
        return "random-fair";
    case ScheduleKind::SingletonCyclic:
        return "singleton-cyclic";
    }
    return "unknown";
}

UpdateSchedule::UpdateSchedule(ScheduleKind kind, std::size_t node_count, std::uint64_t seed, std::size_t horizon)
    : kind_(kind), n_(node_count), rng_(seed) {
    switch (kind_) {
    case ScheduleKind::RoundRobin:
        horizon_ = 1;
        current_.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            current_[v] = static_cast<NodeId>(v);
        }
        break;
    case ScheduleKind::SingletonCyclic:
        horizon_ = std::max<std::size_t>(n_, 1);
        break;
    case ScheduleKind::RandomFair:
        horizon_ = horizon != 0 ? horizon : std::max<std::size_t>(2 * n_, 1);
        last_seen_.assign(n_, -1);
        break;
    }
}

std::span<const NodeId> UpdateSchedule::next() {
    const std::size_t e = emitted_++;
    switch (kind_) {
    case ScheduleKind::RoundRobin:
        return current_;
    case ScheduleKind::SingletonCyclic:
        current_.clear();
        if (n_ > 0) {
            current_.push_back(static_cast<NodeId>(e % n_));
        }
        return current_;
    case ScheduleKind::RandomFair: {
        current_.clear();
        std::uint64_t bits = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            if (v % 64 == 0) {
                bits = rng_();
            }
            const bool coin = (bits >> (v % 64)) & 1u;
            // Forced once the node is about to fall out of a full horizon window.
            const bool forced = static_cast<long long>(e) - last_seen_[v] >= static_cast<long long>(horizon_);
            if (coin || forced) {
                current_.push_back(static_cast<NodeId>(v));
                last_seen_[v] = static_cast<long long>(e);
            }
        }
        return current_;
    }
    }
    return current_;
}

UpdateSchedule make_schedule(ScheduleKind kind, std::size_t node_count, std::uint64_t seed) {
    return UpdateSchedule(kind, node_count, seed);
}

TraceSink jsonl_trace(std::ostream& out) {
    return [&out](const TraceEvent& event) {
        nlohmann::json line = {{"step", event.step}, {"nodes", event.nodes}, {"states", event.states}};
        out << line.dump() << '\n';
    };
}

namespace {

std::size_t default_budget(const SystemState& x0, std::size_t horizon) {
    const std::size_t sweeps = x0.size() * static_cast<std::size_t>(x0.max_state()) + 1;
    return sweeps * std::max<std::size_t>(horizon, 1);
}

/// Gathers neighbor states and evaluates the rule at v.
class Evaluator {
public:
    Evaluator(const Graph& g, const LocalRule& rule) : g_(g), rule_(rule) {
        const std::size_t delta = max_degree(g);
        gathered_.resize(delta);
        scratch_.resize(delta + 1);
    }

    State operator()(NodeId v, std::span<const State> state) {
        auto nbrs = g_.neighbors(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            gathered_[i] = state[nbrs[i]];
        }
        return rule_(state[v], std::span<const State>(gathered_.data(), nbrs.size()), scratch_);
    }

private:
    const Graph& g_;
    const LocalRule& rule_;
    std::vector<State> gathered_;
    std::vector<std::uint32_t> scratch_;
};

void check_input(const Graph& g, const SystemState& x0) {
    if (x0.size() != g.node_count()) {
        throw DomainError("state size does not match node count");
    }
}

[[noreturn]] void contractivity_violation(NodeId v, std::size_t step, State before, State after) {
    throw PropertyViolation(v, step,
                            "contractivity violated at node " + std::to_string(v) + " in step " +
                                std::to_string(step) + ": " + std::to_string(before) + " -> " +
                                std::to_string(after));
}

}  // namespace

FixedPointResult run_to_fixed_point(const Graph& g, const LocalRule& rule, UpdateSchedule& schedule,
                                    SystemState x0, const RunOptions& options) {
    check_input(g, x0);
    if (schedule.node_count() != g.node_count()) {
        throw DomainError("schedule node count does not match graph");
    }
    const std::size_t n = g.node_count();
    const std::size_t budget = options.step_budget.value_or(default_budget(x0, schedule.horizon()));

    FixedPointResult result;
    std::vector<State> state(x0.values().begin(), x0.values().end());
    std::vector<char> dirty(n, 1);
    std::size_t dirty_count = n;
    Evaluator evaluate(g, rule);
    TraceEvent event;

    while (dirty_count > 0) {
        if (result.steps >= budget) {
            throw PropertyViolation(0, result.steps, "step budget exhausted before reaching a fixed point");
        }
        auto subset = schedule.next();
        const std::size_t step = ++result.steps;
        event.nodes.clear();
        event.states.clear();
        for (NodeId v : subset) {
            if (!dirty[v]) {
                continue;
            }
            dirty[v] = 0;
            --dirty_count;
            ++result.evaluations;
            State updated = evaluate(v, state);
            if (updated != state[v]) {
                if (updated > state[v]) {
                    contractivity_violation(v, step, state[v], updated);
                }
                event.nodes.push_back(v);
                event.states.push_back(updated);
            }
        }
        for (std::size_t i = 0; i < event.nodes.size(); ++i) {
            NodeId v = event.nodes[i];
            state[v] = event.states[i];
            if (!dirty[v]) {
                dirty[v] = 1;
                ++dirty_count;
            }
            for (NodeId u : g.neighbors(v)) {
                if (!dirty[u]) {
                    dirty[u] = 1;
                    ++dirty_count;
                }
            }
        }
        result.changes += event.nodes.size();
        if (options.trace && !event.nodes.empty()) {
            event.step = step;
            options.trace(event);
        }
    }
    result.state = SystemState(std::move(state), x0.max_state());
    return result;
}

FixedPointResult settle(const Graph& g, const LocalRule& rule, SystemState x0, const RunOptions& options) {
    check_input(g, x0);
    const std::size_t n = g.node_count();
    const std::size_t budget = options.step_budget.value_or(default_budget(x0, n));

    FixedPointResult result;
    std::vector<State> state(x0.values().begin(), x0.values().end());
    std::vector<char> queued(n, 1);
    std::deque<NodeId> worklist;
    for (NodeId v = 0; v < n; ++v) {
        worklist.push_back(v);
    }
    Evaluator evaluate(g, rule);
    TraceEvent event;

    while (!worklist.empty()) {
        if (result.steps >= budget) {
            throw PropertyViolation(0, result.steps, "step budget exhausted before reaching a fixed point");
        }
        NodeId v = worklist.front();
        worklist.pop_front();
        queued[v] = 0;
        const std::size_t step = ++result.steps;
        ++result.evaluations;
        State updated = evaluate(v, state);
        if (updated == state[v]) {
            continue;
        }
        if (updated > state[v]) {
            contractivity_violation(v, step, state[v], updated);
        }
        state[v] = updated;
        ++result.changes;
        if (!queued[v]) {
            queued[v] = 1;
            worklist.push_back(v);
        }
        for (NodeId u : g.neighbors(v)) {
            if (!queued[u]) {
                queued[u] = 1;
                worklist.push_back(u);
            }
        }
        if (options.trace) {
            event.step = step;
            event.nodes.assign(1, v);
            event.states.assign(1, updated);
            options.trace(event);
        }
    }
    result.state = SystemState(std::move(state), x0.max_state());
    return result;
}

std::vector<State> fixed_point_ranks(const Graph& g, int t) {
    auto result = settle(g, t_system_rule(t), degree_state(g));
    auto values = result.state.values();
    return {values.begin(), values.end()};
}

DSpectrum compute_spectrum_chained(const Graph& g, const TraceSink& trace) {
    const std::size_t delta = max_degree(g);
    DSpectrum spectrum(g.node_count(), delta);
    SystemState current = degree_state(g);
    spectrum.set_column(delta, current.values());
    RunOptions options{trace, std::nullopt};
    for (std::size_t c = delta; c-- > 0;) {
        current = settle(g, t_system_rule(DSpectrum::order_of_column(c)), std::move(current), options).state;
        spectrum.set_column(c, current.values());
    }
    return spectrum;
}

}  // namespace dspectrum
