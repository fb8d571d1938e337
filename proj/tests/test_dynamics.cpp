#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include "dspectrum/dchain.hpp"
#include "dspectrum/dynamics.hpp"
#include "dspectrum/errors.hpp"

#include <doctest.h>

#include <json.hpp>

#include <set>
#include <sstream>

using namespace dspectrum;
using namespace dspectrum::testing;

namespace {

State h_index(std::vector<State> states, int t) {
    std::vector<std::uint32_t> scratch(states.size() + 1);
    return offset_h_index(states, t, scratch);
}

std::vector<State> values_of(const SystemState& s) {
    return {s.values().begin(), s.values().end()};
}

std::vector<Graph> test_graphs() {
    std::vector<Graph> out;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        out.push_back(erdos_renyi(12 + 4 * seed, 0.15, 40 + seed));
    }
    for (auto& g : small_named_graphs()) {
        out.push_back(std::move(g.graph));
    }
    return out;
}

}  // namespace

TEST_CASE("offset h-index examples") {
    CHECK(h_index({3, 3, 3}, 0) == 3);
    CHECK(h_index({5, 4, 4, 2, 1}, 0) == 3);
    CHECK(h_index({1, 1}, -1) == 2);
    CHECK(h_index({}, 0) == 0);
    CHECK(h_index({0, 0, 0}, 0) == 0);
    CHECK(h_index({0, 0, 0}, -3) == 3);
    CHECK(h_index({9, 9}, 5) == 2);
}

TEST_CASE("offset h-index agrees with brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<State> states(rng() % 9);
        for (auto& s : states) {
            s = static_cast<State>(rng() % 10);
        }
        const int t = static_cast<int>(rng() % 12) - 8;
        CAPTURE(t);
        CHECK(h_index(states, t) == brute_offset_h_index(states, t));
    }
}

TEST_CASE("the [t]-system rule is monotone in neighbor states") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t deg = rng() % 8;
        std::vector<State> low(deg);
        std::vector<State> high(deg);
        for (std::size_t i = 0; i < deg; ++i) {
            low[i] = static_cast<State>(rng() % 8);
            high[i] = low[i] + static_cast<State>(rng() % 4);
        }
        const int t = static_cast<int>(rng() % 10) - 7;
        LocalRule rule = t_system_rule(t);
        std::vector<std::uint32_t> scratch(deg + 1);
        CHECK(rule(0, low, scratch) <= rule(0, high, scratch));
    }
}

TEST_CASE("schedules") {
    SUBCASE("round-robin emits V every time") {
        auto s = make_schedule(ScheduleKind::RoundRobin, 3, 0);
        for (int i = 0; i < 4; ++i) {
            auto w = s.next();
            CHECK(std::vector<NodeId>(w.begin(), w.end()) == std::vector<NodeId>{0, 1, 2});
        }
    }
    SUBCASE("singleton-cyclic cycles through the nodes") {
        auto s = make_schedule(ScheduleKind::SingletonCyclic, 3, 0);
        std::vector<NodeId> seen;
        for (int i = 0; i < 7; ++i) {
            auto w = s.next();
            REQUIRE(w.size() == 1);
            seen.push_back(w[0]);
        }
        CHECK(seen == std::vector<NodeId>{0, 1, 2, 0, 1, 2, 0});
    }
    SUBCASE("random-fair covers every node in each window of 2n emissions") {
        for (std::size_t n : {3u, 10u, 70u}) {
            auto s = make_schedule(ScheduleKind::RandomFair, n, 7);
            CHECK(s.horizon() == 2 * n);
            std::vector<std::vector<NodeId>> emissions;
            for (std::size_t i = 0; i < 20 * n; ++i) {
                auto w = s.next();
                emissions.emplace_back(w.begin(), w.end());
            }
            for (std::size_t start = 0; start + 2 * n <= emissions.size(); ++start) {
                std::set<NodeId> covered;
                for (std::size_t i = start; i < start + 2 * n; ++i) {
                    covered.insert(emissions[i].begin(), emissions[i].end());
                }
                REQUIRE(covered.size() == n);
            }
        }
    }
    SUBCASE("random-fair honours a tight horizon") {
        UpdateSchedule s(ScheduleKind::RandomFair, 40, 3, 2);
        std::vector<NodeId> prev;
        for (int i = 0; i < 200; ++i) {
            auto w = s.next();
            std::set<NodeId> covered(w.begin(), w.end());
            covered.insert(prev.begin(), prev.end());
            if (i > 0) {
                REQUIRE(covered.size() == 40);
            }
            prev.assign(w.begin(), w.end());
        }
    }
}

TEST_CASE("run_to_fixed_point examples") {
    SUBCASE("star under the [-1]-system") {
        Graph s = star(3);
        auto sched = make_schedule(ScheduleKind::RoundRobin, 4, 0);
        auto result = run_to_fixed_point(s, t_system_rule(-1), sched, degree_state(s));
        CHECK(values_of(result.state) == std::vector<State>{2, 1, 1, 1});
    }
    SUBCASE("K4 is already fixed under the [0]-system") {
        Graph k4 = complete(4);
        auto sched = make_schedule(ScheduleKind::RoundRobin, 4, 0);
        auto result = run_to_fixed_point(k4, t_system_rule(0), sched, degree_state(k4));
        CHECK(values_of(result.state) == std::vector<State>{3, 3, 3, 3});
        CHECK(result.changes == 0);
        CHECK(result.steps == 1);
    }
    SUBCASE("positive t collapses to zero") {
        for (const Graph& g : {path(3), complete(4)}) {
            for (auto kind : {ScheduleKind::RoundRobin, ScheduleKind::SingletonCyclic, ScheduleKind::RandomFair}) {
                auto sched = make_schedule(kind, g.node_count(), 9);
                auto result = run_to_fixed_point(g, t_system_rule(1), sched, degree_state(g));
                CHECK(values_of(result.state) == std::vector<State>(g.node_count(), 0));
            }
        }
    }
}

TEST_CASE("fixed points equal deletion ranks for every t") {
    for (const Graph& g : test_graphs()) {
        const int delta = static_cast<int>(max_degree(g));
        for (int t = 0; t >= -delta; --t) {
            CHECK(fixed_point_ranks(g, t) == ranks_for_order(g, t).ranks);
        }
    }
}

TEST_CASE("fixed point does not depend on the fair schedule") {
    for (const Graph& g : test_graphs()) {
        const int delta = static_cast<int>(max_degree(g));
        for (int t = 0; t >= -delta; --t) {
            const auto expected = fixed_point_ranks(g, t);
            std::vector<UpdateSchedule> schedules;
            schedules.push_back(make_schedule(ScheduleKind::RoundRobin, g.node_count(), 0));
            schedules.push_back(make_schedule(ScheduleKind::SingletonCyclic, g.node_count(), 0));
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                schedules.push_back(make_schedule(ScheduleKind::RandomFair, g.node_count(), seed));
            }
            for (auto& s : schedules) {
                auto result = run_to_fixed_point(g, t_system_rule(t), s, degree_state(g));
                CHECK(values_of(result.state) == expected);
            }
        }
    }
}

TEST_CASE("trajectories from the degree start never increase a state") {
    Graph g = erdos_renyi(40, 0.15, 3);
    for (int t : {0, -1, -2}) {
        std::vector<State> current = values_of(degree_state(g));
        RunOptions options;
        bool monotone = true;
        options.trace = [&](const TraceEvent& e) {
            for (std::size_t i = 0; i < e.nodes.size(); ++i) {
                monotone &= e.states[i] < current[e.nodes[i]];
                current[e.nodes[i]] = e.states[i];
            }
        };
        auto sched = make_schedule(ScheduleKind::RandomFair, g.node_count(), 1);
        auto result = run_to_fixed_point(g, t_system_rule(t), sched, degree_state(g), options);
        CHECK(monotone);
        CHECK(current == values_of(result.state));
    }
}

TEST_CASE("the raw [t]-rule is not contractive below the fixed point") {
    // A tree: v joined to three star centers. Cores are all 1, but with the centers held
    // at their degrees and v lowered to its core number, v's update rises to 3.
    std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {0, 2}, {0, 3}};
    NodeId leaf = 4;
    for (NodeId center = 1; center <= 3; ++center) {
        for (int i = 0; i < 5; ++i) {
            edges.emplace_back(center, leaf++);
        }
    }
    Graph g = make_graph(leaf, edges);
    SystemState x = degree_state(g);
    x.set(0, 1);
    auto sched = make_schedule(ScheduleKind::RoundRobin, g.node_count(), 0);
    try {
        run_to_fixed_point(g, t_system_rule(0), sched, x);
        FAIL("expected a contractivity violation");
    } catch (const PropertyViolation& e) {
        CHECK(e.node() == 0);
        CHECK(e.step() == 1);
    }

    auto sched2 = make_schedule(ScheduleKind::RoundRobin, g.node_count(), 0);
    auto closed = run_to_fixed_point(g, contractive_closure(t_system_rule(0)), sched2, x);
    CHECK(values_of(closed.state) == std::vector<State>(g.node_count(), 1));
}

TEST_CASE("states between the fixed point and the degrees reach the same fixed point") {
    std::mt19937_64 rng(21);
    for (const Graph& g : test_graphs()) {
        const int delta = static_cast<int>(max_degree(g));
        for (int t = 0; t >= -delta; --t) {
            const auto z = fixed_point_ranks(g, t);
            const auto x = values_of(degree_state(g));
            for (int sample = 0; sample < 3; ++sample) {
                std::vector<State> y(z.size());
                for (std::size_t v = 0; v < y.size(); ++v) {
                    y[v] = z[v] + static_cast<State>(rng() % (x[v] - z[v] + 1));
                }
                auto sched = make_schedule(ScheduleKind::RandomFair, g.node_count(), rng());
                auto result = run_to_fixed_point(g, contractive_closure(t_system_rule(t)), sched,
                                                 SystemState(y, static_cast<State>(delta)));
                CHECK(values_of(result.state) == z);
            }
        }
    }
}

TEST_CASE("warm start from C^{t-1} equals the cold start") {
    for (const Graph& g : test_graphs()) {
        const int delta = static_cast<int>(max_degree(g));
        for (int t = -delta + 1; t <= 0; ++t) {
            SystemState seed(fixed_point_ranks(g, t - 1), static_cast<State>(delta));
            auto warm = settle(g, t_system_rule(t), seed);
            CHECK(values_of(warm.state) == fixed_point_ranks(g, t));
        }
    }
}

TEST_CASE("compute_spectrum_chained equals full_spectrum") {
    CHECK(compute_spectrum_chained(path(3)) == full_spectrum(path(3)));
    CHECK(compute_spectrum_chained(complete(4)) == full_spectrum(complete(4)));
    CHECK(compute_spectrum_chained(edgeless(4)) == full_spectrum(edgeless(4)));
    CHECK(compute_spectrum_chained(Graph{}) == full_spectrum(Graph{}));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = erdos_renyi(50, 0.1, seed);
        CHECK(compute_spectrum_chained(g) == full_spectrum(g));
    }
}

TEST_CASE("trace emits one JSON object per changing step") {
    Graph s = star(3);
    std::ostringstream out;
    RunOptions options{jsonl_trace(out), std::nullopt};
    auto sched = make_schedule(ScheduleKind::RoundRobin, 4, 0);
    run_to_fixed_point(s, t_system_rule(-1), sched, degree_state(s), options);
    std::istringstream lines(out.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    auto event = nlohmann::json::parse(line);
    CHECK(event["step"] == 1);
    CHECK(event["nodes"] == nlohmann::json::array({0}));
    CHECK(event["states"] == nlohmann::json::array({2}));
    CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("step budget exhaustion is reported") {
    Graph g = path(6);
    auto sched = make_schedule(ScheduleKind::SingletonCyclic, g.node_count(), 0);
    RunOptions options;
    options.step_budget = 2;
    CHECK_THROWS_AS(run_to_fixed_point(g, t_system_rule(1), sched, degree_state(g), options), PropertyViolation);
}

TEST_CASE("SystemState validation") {
    CHECK_THROWS_AS(SystemState({1, 4}, 3), DomainError);
    SystemState s({1, 2}, 3);
    CHECK_THROWS_AS(s.set(0, 4), DomainError);
    CHECK(SystemState({1, 1}, 3).dominated_by(SystemState({1, 2}, 3)));
    CHECK_FALSE(SystemState({2, 1}, 3).dominated_by(SystemState({1, 2}, 3)));
    CHECK_THROWS_AS(settle(path(3), t_system_rule(0), SystemState({1, 1}, 2)), DomainError);
}
