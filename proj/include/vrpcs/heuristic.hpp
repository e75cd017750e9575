#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <exception>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "instance.hpp"
#include "moves.hpp"
#include "rng.hpp"
#include "solution.hpp"

namespace vrpcs {

struct HeuristicConfig {
    std::uint64_t seed = 0;
    int restarts = 10;
    int max_non_improving_sweeps = 2;
    bool first_improvement = false;   // default: best move per neighborhood per sweep
    int kicks = 20;                   // perturb-and-reoptimize rounds per restart (0 disables)
    int kick_strength = 2;            // random moves per perturbation
    double budget_seconds = 600.0;    // wall clock; the incumbent is returned when it runs out
    int threads = 1;                  // concurrent restarts
    std::function<void(const std::string &)> trace; // JSON-lines move log; forces sequential restarts
};

struct HeuristicReport {
    double construction_cost = 0.0;  // savings start of the winning restart
    double best_cost = 0.0;
    std::vector<double> best_after_restart; // running minimum in restart order
    int restarts_completed = 0;
    bool budget_exhausted = false;
    std::int64_t elapsed_ms = 0;

    // Relative improvement of the local search over its own construction.
    double improvement() const {
        return construction_cost > 0.0 ? (construction_cost - best_cost) / construction_cost : 0.0;
    }
};

struct HeuristicResult {
    Solution solution;
    HeuristicReport report;
};

namespace detail {

inline constexpr double kImproveEps = 1e-9;

using Clock = std::chrono::steady_clock;

// Parallel Clarke-Wright savings c[i][0] + c[0][j] - shape * c[i][j] over the customers not
// preset to the crowd; tie order comes from `rank`.
inline RoutingState savings_construction(const Instance &in, const std::vector<int> &rank, double shape = 1.0,
                                         const std::vector<bool> &preset_crowd = {}) {
    const int n = in.customers();
    const auto skipped = [&preset_crowd](int i) {
        return !preset_crowd.empty() && preset_crowd[static_cast<std::size_t>(i)];
    };
    struct Saving {
        double value;
        int i;
        int j;
    };
    std::vector<Saving> savings;
    savings.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i != j && !skipped(i) && !skipped(j)) {
                const double value = in.cost(i, 0) + in.cost(0, j) - shape * in.cost(i, j);
                if (value > 0.0) {
                    savings.push_back({value, i, j});
                }
            }
        }
    }
    std::sort(savings.begin(), savings.end(), [&rank](const Saving &a, const Saving &b) {
        if (a.value != b.value) {
            return a.value > b.value;
        }
        const auto ka = std::pair(rank[static_cast<std::size_t>(a.i)], rank[static_cast<std::size_t>(a.j)]);
        const auto kb = std::pair(rank[static_cast<std::size_t>(b.i)], rank[static_cast<std::size_t>(b.j)]);
        return ka < kb;
    });

    // chains of customers; route_of[i] is the chain id, chains merged by concatenation
    std::vector<std::vector<int>> chains(static_cast<std::size_t>(n) + 1);
    std::vector<int> route_of(static_cast<std::size_t>(n) + 1);
    std::vector<int> load(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        if (skipped(i)) {
            continue;
        }
        chains[static_cast<std::size_t>(i)] = {i};
        route_of[static_cast<std::size_t>(i)] = i;
        load[static_cast<std::size_t>(i)] = in.demand(i);
    }
    for (const auto &s : savings) {
        const int ri = route_of[static_cast<std::size_t>(s.i)];
        const int rj = route_of[static_cast<std::size_t>(s.j)];
        if (ri == rj) {
            continue;
        }
        auto &ci = chains[static_cast<std::size_t>(ri)];
        auto &cj = chains[static_cast<std::size_t>(rj)];
        if (ci.back() != s.i || cj.front() != s.j) {
            continue;
        }
        if (load[static_cast<std::size_t>(ri)] + load[static_cast<std::size_t>(rj)] > in.capacity()) {
            continue;
        }
        for (int k : cj) {
            route_of[static_cast<std::size_t>(k)] = ri;
        }
        ci.insert(ci.end(), cj.begin(), cj.end());
        load[static_cast<std::size_t>(ri)] += load[static_cast<std::size_t>(rj)];
        cj.clear();
    }
    RoutingState state;
    // routes listed in the order of their first customer's tie rank
    std::vector<int> ids;
    for (int i = 1; i <= n; ++i) {
        if (!chains[static_cast<std::size_t>(i)].empty()) {
            ids.push_back(i);
        }
    }
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        return rank[static_cast<std::size_t>(chains[static_cast<std::size_t>(a)].front())] <
               rank[static_cast<std::size_t>(chains[static_cast<std::size_t>(b)].front())];
    });
    for (int id : ids) {
        state.routes.push_back(chains[static_cast<std::size_t>(id)]);
        state.loads.push_back(load[static_cast<std::size_t>(id)]);
    }
    for (int i = 1; i <= n; ++i) {
        if (skipped(i)) {
            state.crowd.push_back(i);
        }
    }
    return state;
}

// Merges the cheapest compatible pair of routes until at most m remain.
inline void coerce_route_count(const Instance &in, RoutingState &state) {
    while (state.route_count() > in.fleet_size()) {
        double best = std::numeric_limits<double>::infinity();
        Route best_route;
        int best_a = -1, best_b = -1;
        for (int a = 0; a < state.route_count(); ++a) {
            for (int b = a + 1; b < state.route_count(); ++b) {
                if (state.loads[static_cast<std::size_t>(a)] + state.loads[static_cast<std::size_t>(b)] > in.capacity()) {
                    continue;
                }
                const auto &ra = state.routes[static_cast<std::size_t>(a)];
                const auto &rb = state.routes[static_cast<std::size_t>(b)];
                const double base = route_cost(in, ra) + route_cost(in, rb);
                Route rev_a(ra.rbegin(), ra.rend());
                Route rev_b(rb.rbegin(), rb.rend());
                const std::pair<const Route *, const Route *> joins[] = {{&ra, &rb}, {&rb, &ra}, {&rev_a, &rb}, {&ra, &rev_b}};
                for (const auto &[first, second] : joins) {
                    Route merged = *first;
                    merged.insert(merged.end(), second->begin(), second->end());
                    const double increase = route_cost(in, merged) - base;
                    if (increase < best) {
                        best = increase;
                        best_route = std::move(merged);
                        best_a = a;
                        best_b = b;
                    }
                }
            }
        }
        if (best_a < 0) {
            throw InfeasibleError("cannot merge routes down to the fleet size of " + std::to_string(in.fleet_size()));
        }
        state.routes[static_cast<std::size_t>(best_a)] = std::move(best_route);
        state.loads[static_cast<std::size_t>(best_a)] += state.loads[static_cast<std::size_t>(best_b)];
        state.routes.erase(state.routes.begin() + best_b);
        state.loads.erase(state.loads.begin() + best_b);
    }
}

struct Candidate {
    Move move;
    double delta;
};

class LocalSearch {
  public:
    LocalSearch(const Instance &in, const HeuristicConfig &config, Clock::time_point deadline, int restart)
        : in_(in), config_(config), deadline_(deadline), restart_(restart) {}

    // Runs sweeps until max_non_improving_sweeps consecutive sweeps find nothing.
    // Returns false when the deadline interrupted the search.
    bool run(RoutingState &state) {
        int idle = 0;
        int sweep = 0;
        while (idle < config_.max_non_improving_sweeps) {
            if (Clock::now() >= deadline_) {
                return false;
            }
            bool improved = false;
            for (int hood = 0; hood < 4; ++hood) {
                const auto cand = best_in(hood, state);
                if (cand && cand->delta < -kImproveEps) {
                    commit(*cand, state, sweep);
                    improved = true;
                }
            }
            idle = improved ? 0 : idle + 1;
            ++sweep;
        }
        return true;
    }

  private:
    void consider(std::optional<Candidate> &best, Move move, double delta, bool &stop) {
        if (!best || delta < best->delta) {
            best = Candidate{move, delta};
            if (config_.first_improvement && delta < -kImproveEps) {
                stop = true;
            }
        }
    }

    std::optional<Candidate> best_in(int hood, const RoutingState &s) {
        switch (hood) {
        case 0: return crowd_toggle(s);
        case 1: return relocate(s);
        case 2: return swap(s);
        default: return two_opt(s);
        }
    }

    std::optional<Candidate> crowd_toggle(const RoutingState &s) {
        std::optional<Candidate> best;
        bool stop = false;
        const double p = in_.reward();
        for (int r = 0; r < s.route_count() && !stop; ++r) {
            const auto &route = s.routes[static_cast<std::size_t>(r)];
            for (int pos = 0; pos < static_cast<int>(route.size()) && !stop; ++pos) {
                if (in_.is_eligible(route[static_cast<std::size_t>(pos)])) {
                    consider(best, CrowdRemove{r, pos}, p - removal_gain(in_, route, pos), stop);
                }
            }
        }
        for (int i : s.crowd) {
            if (stop) {
                break;
            }
            const int q = in_.demand(i);
            for (int r = 0; r < s.route_count() && !stop; ++r) {
                if (s.loads[static_cast<std::size_t>(r)] + q > in_.capacity()) {
                    continue;
                }
                const auto &route = s.routes[static_cast<std::size_t>(r)];
                for (int pos = 0; pos <= static_cast<int>(route.size()) && !stop; ++pos) {
                    consider(best, CrowdInsert{i, r, pos}, insertion_cost(in_, route, pos, i) - p, stop);
                }
            }
            if (!stop && s.route_count() < in_.fleet_size()) {
                consider(best, CrowdInsert{i, s.route_count(), 0}, in_.out_and_back(i) - p, stop);
            }
        }
        return best;
    }

    std::optional<Candidate> relocate(const RoutingState &s) {
        std::optional<Candidate> best;
        bool stop = false;
        const bool can_open = s.route_count() < in_.fleet_size();
        for (int a = 0; a < s.route_count() && !stop; ++a) {
            const auto &from = s.routes[static_cast<std::size_t>(a)];
            for (int pa = 0; pa < static_cast<int>(from.size()) && !stop; ++pa) {
                const int i = from[static_cast<std::size_t>(pa)];
                const int q = in_.demand(i);
                const double gain = removal_gain(in_, from, pa);
                for (int b = 0; b < s.route_count() && !stop; ++b) {
                    if (b == a || s.loads[static_cast<std::size_t>(b)] + q > in_.capacity()) {
                        continue;
                    }
                    const auto &to = s.routes[static_cast<std::size_t>(b)];
                    for (int pb = 0; pb <= static_cast<int>(to.size()) && !stop; ++pb) {
                        consider(best, Relocate{a, pa, b, pb}, insertion_cost(in_, to, pb, i) - gain, stop);
                    }
                }
                if (can_open && from.size() > 1 && !stop) {
                    consider(best, Relocate{a, pa, s.route_count(), 0}, in_.out_and_back(i) - gain, stop);
                }
            }
        }
        return best;
    }

    std::optional<Candidate> swap(const RoutingState &s) {
        std::optional<Candidate> best;
        bool stop = false;
        const int cap = in_.capacity();
        for (int a = 0; a < s.route_count() && !stop; ++a) {
            const auto &ra = s.routes[static_cast<std::size_t>(a)];
            for (int b = a + 1; b < s.route_count() && !stop; ++b) {
                const auto &rb = s.routes[static_cast<std::size_t>(b)];
                for (int pa = 0; pa < static_cast<int>(ra.size()) && !stop; ++pa) {
                    const int i = ra[static_cast<std::size_t>(pa)];
                    const int a1 = before(ra, pa), b1 = after(ra, pa);
                    const double out_i = in_.cost(a1, i) + in_.cost(i, b1);
                    for (int pb = 0; pb < static_cast<int>(rb.size()) && !stop; ++pb) {
                        const int j = rb[static_cast<std::size_t>(pb)];
                        const int dq = in_.demand(j) - in_.demand(i);
                        if (s.loads[static_cast<std::size_t>(a)] + dq > cap || s.loads[static_cast<std::size_t>(b)] - dq > cap) {
                            continue;
                        }
                        const int a2 = before(rb, pb), b2 = after(rb, pb);
                        const double delta = in_.cost(a1, j) + in_.cost(j, b1) - out_i + in_.cost(a2, i) +
                                             in_.cost(i, b2) - in_.cost(a2, j) - in_.cost(j, b2);
                        consider(best, Swap{a, pa, b, pb}, delta, stop);
                    }
                }
            }
        }
        return best;
    }

    std::optional<Candidate> two_opt(const RoutingState &s) {
        std::optional<Candidate> best;
        bool stop = false;
        const bool symmetric = in_.symmetric_costs();
        std::vector<double> forward, backward;
        for (int r = 0; r < s.route_count() && !stop; ++r) {
            const auto &route = s.routes[static_cast<std::size_t>(r)];
            const int len = static_cast<int>(route.size());
            if (len < 2) {
                continue;
            }
            if (!symmetric) {
                // prefix sums of internal arcs in both directions
                forward.assign(static_cast<std::size_t>(len), 0.0);
                backward.assign(static_cast<std::size_t>(len), 0.0);
                for (int k = 1; k < len; ++k) {
                    const int u = route[static_cast<std::size_t>(k - 1)];
                    const int v = route[static_cast<std::size_t>(k)];
                    forward[static_cast<std::size_t>(k)] = forward[static_cast<std::size_t>(k - 1)] + in_.cost(u, v);
                    backward[static_cast<std::size_t>(k)] = backward[static_cast<std::size_t>(k - 1)] + in_.cost(v, u);
                }
            }
            for (int first = 0; first < len - 1 && !stop; ++first) {
                const int a = before(route, first);
                const int f = route[static_cast<std::size_t>(first)];
                for (int last = first + 1; last < len && !stop; ++last) {
                    const int l = route[static_cast<std::size_t>(last)];
                    const int b = after(route, last);
                    double delta = in_.cost(a, l) + in_.cost(f, b) - in_.cost(a, f) - in_.cost(l, b);
                    if (!symmetric) {
                        delta += (backward[static_cast<std::size_t>(last)] - backward[static_cast<std::size_t>(first)]) -
                                 (forward[static_cast<std::size_t>(last)] - forward[static_cast<std::size_t>(first)]);
                    }
                    consider(best, TwoOpt{r, first, last}, delta, stop);
                }
            }
        }
        return best;
    }

    void commit(const Candidate &cand, RoutingState &state, int sweep) {
#ifndef NDEBUG
        const double before_cost = state.total_cost(in_);
        const double reference = neighborhood_delta(cand.move, state, in_);
        assert(std::abs(reference - cand.delta) <= 1e-9 * std::max(1.0, std::abs(before_cost)));
#endif
        apply_move(cand.move, state, in_);
#ifndef NDEBUG
        const double after_cost = state.total_cost(in_);
        assert(std::abs((after_cost - before_cost) - cand.delta) <= 1e-9 * std::max(1.0, std::abs(before_cost)));
        for (std::size_t r = 0; r < state.routes.size(); ++r) {
            assert(state.loads[r] == route_load(in_, state.routes[r]) && state.loads[r] <= in_.capacity());
        }
        assert(state.route_count() <= in_.fleet_size());
#endif
        if (config_.trace) {
            nlohmann::json line = {{"restart", restart_}, {"sweep", sweep}, {"move", move_name(cand.move)}, {"delta", cand.delta}};
            config_.trace(line.dump());
        }
    }

    const Instance &in_;
    const HeuristicConfig &config_;
    Clock::time_point deadline_;
    int restart_;
};

// Random feasible moves that ignore cost: relocate a customer to a random position (possibly a
// new route) or flip an eligible customer between vehicle and crowd.
inline void perturb(const Instance &in, RoutingState &s, CounterRng &rng, int strength) {
    const int n = in.customers();
    for (int step = 0; step < strength; ++step) {
        const int i = static_cast<int>(rng.uniform_int(1, n));
        const auto crowd_it = std::find(s.crowd.begin(), s.crowd.end(), i);
        const bool in_crowd = crowd_it != s.crowd.end();
        int route = -1, pos = -1;
        if (!in_crowd) {
            for (int r = 0; r < s.route_count() && route < 0; ++r) {
                const auto &rt = s.routes[static_cast<std::size_t>(r)];
                const auto it = std::find(rt.begin(), rt.end(), i);
                if (it != rt.end()) {
                    route = r;
                    pos = static_cast<int>(it - rt.begin());
                }
            }
        }
        const bool flip = in.is_eligible(i) && rng.uniform() < 0.5;
        if (!in_crowd && flip) {
            apply_move(CrowdRemove{route, pos}, s, in);
            continue;
        }
        // pick a random target among routes with room, or a new route when the fleet allows
        std::vector<int> targets;
        for (int r = 0; r < s.route_count(); ++r) {
            if (r != route && s.loads[static_cast<std::size_t>(r)] + in.demand(i) <= in.capacity()) {
                targets.push_back(r);
            }
        }
        const bool can_open = s.route_count() < in.fleet_size() && !(route >= 0 && s.routes[static_cast<std::size_t>(route)].size() == 1);
        if (can_open) {
            targets.push_back(s.route_count());
        }
        if (targets.empty()) {
            continue;
        }
        const int to = targets[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(targets.size()) - 1))];
        const int size = to == s.route_count() ? 0 : static_cast<int>(s.routes[static_cast<std::size_t>(to)].size());
        const int at = static_cast<int>(rng.uniform_int(0, size));
        if (in_crowd) {
            apply_move(CrowdInsert{i, to, at}, s, in);
        } else {
            apply_move(Relocate{route, pos, to, at}, s, in);
        }
    }
}

struct RestartOutcome {
    bool ran = false;
    std::string failure; // set when the start could not be brought down to m routes
    bool interrupted = false;
    double construction_cost = 0.0;
    Solution solution;
};

inline RestartOutcome run_restart(const Instance &in, const HeuristicConfig &config, int restart, Clock::time_point deadline) {
    RestartOutcome out;
    const int n = in.customers();
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        order[static_cast<std::size_t>(i)] = i + 1;
    }
    // Restart 0 is the plain savings start. Later restarts shuffle the tie order, draw the
    // savings shape factor from [0.5, 1.5] and preset each eligible customer to the crowd with
    // probability 1/2.
    double shape = 1.0;
    std::vector<bool> preset;
    if (restart > 0) {
        CounterRng rng(hash_seed(config.seed, static_cast<std::uint64_t>(restart)));
        rng.shuffle(order);
        shape = rng.uniform(0.5, 1.5);
        preset.assign(static_cast<std::size_t>(n) + 1, false);
        for (int i : in.eligible()) {
            preset[static_cast<std::size_t>(i)] = rng.uniform() < 0.5;
        }
    }
    std::vector<int> rank(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 0; k < n; ++k) {
        rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
    }

    RoutingState state = savings_construction(in, rank, shape, preset);
    try {
        coerce_route_count(in, state);
    } catch (const InfeasibleError &e) {
        out.failure = e.what();
        return out;
    }
    out.construction_cost = state.total_cost(in);

    if (in.reward() == 0.0) {
        // free crowd shipping: every eligible customer goes to the crowd
        for (auto &route : state.routes) {
            std::erase_if(route, [&in](int i) { return in.is_eligible(i); });
        }
        state.crowd.assign(in.eligible().begin(), in.eligible().end());
        RoutingState kept;
        kept.crowd = state.crowd;
        for (auto &route : state.routes) {
            if (!route.empty()) {
                kept.loads.push_back(route_load(in, route));
                kept.routes.push_back(std::move(route));
            }
        }
        state = std::move(kept);
    }

    LocalSearch search(in, config, deadline, restart);
    out.interrupted = !search.run(state);
    double best_cost = state.total_cost(in);
    CounterRng kick_rng(hash_seed(hash_seed(config.seed, static_cast<std::uint64_t>(restart)), 0x6B1C6B1CULL));
    for (int kick = 0; kick < config.kicks && !out.interrupted; ++kick) {
        RoutingState trial = state;
        perturb(in, trial, kick_rng, config.kick_strength);
        out.interrupted = !search.run(trial);
        const double cost = trial.total_cost(in);
        if (cost < best_cost - kImproveEps * std::max(1.0, best_cost)) {
            state = std::move(trial);
            best_cost = cost;
        }
    }
    out.ran = true;
    out.solution = canonicalize(in, state.to_solution(in));
    return out;
}

inline bool better(const Solution &a, const Solution &b) {
    if (a.total_cost != b.total_cost) {
        return a.total_cost < b.total_cost;
    }
    return canonical_less(a, b);
}

} // namespace detail

// Savings construction plus multi-neighborhood local search, best of several restarts.
inline HeuristicResult solve_heuristic(const Instance &instance, const HeuristicConfig &config = {}) {
    if (config.restarts < 1) {
        throw ConfigError("heuristic needs at least one restart");
    }
    if (config.max_non_improving_sweeps < 1 || config.threads < 1) {
        throw ConfigError("sweep limit and thread count must be positive");
    }
    const auto start = detail::Clock::now();
    const auto budget = std::chrono::duration<double>(std::max(0.0, config.budget_seconds));
    const auto deadline = budget.count() >= 1e9
                              ? detail::Clock::time_point::max()
                              : start + std::chrono::duration_cast<detail::Clock::duration>(budget);

    std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    // restart 0 always runs so that an incumbent exists even with a zero budget
    const auto run_one = [&](int r) {
        if (r > 0 && detail::Clock::now() >= deadline) {
            return;
        }
        outcomes[static_cast<std::size_t>(r)] =
            detail::run_restart(instance, config, r, r == 0 && detail::Clock::now() >= deadline ? detail::Clock::time_point::max() : deadline);
    };
    const int workers = config.trace ? 1 : std::min(config.threads, config.restarts);
    if (workers <= 1) {
        for (int r = 0; r < config.restarts; ++r) {
            run_one(r);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        // exceptions are rethrown after the join below
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int r = next++; r < config.restarts; r = next++) {
                        run_one(r);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    HeuristicResult result;
    auto &report = result.report;
    const detail::RestartOutcome *best = nullptr;
    std::string failure;
    for (const auto &outcome : outcomes) {
        if (!outcome.ran) {
            if (outcome.failure.empty()) {
                report.budget_exhausted = true;
            } else {
                failure = outcome.failure;
            }
            continue;
        }
        ++report.restarts_completed;
        report.budget_exhausted = report.budget_exhausted || outcome.interrupted;
        if (!best || detail::better(outcome.solution, best->solution)) {
            best = &outcome;
        }
        report.best_after_restart.push_back(best->solution.total_cost);
    }
    if (!best) {
        throw InfeasibleError(failure.empty() ? "no restart produced a solution" : failure);
    }
    result.solution = best->solution;
    report.construction_cost = best->construction_cost;
    report.best_cost = best->solution.total_cost;
    report.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(detail::Clock::now() - start).count();
    return result;
}

} // namespace vrpcs
