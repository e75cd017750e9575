#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "solution.hpp"

namespace vrpcs {

struct ExactConfig {
    int max_customers = 12;
    int max_eligible = 12;
    int threads = 1; // workers for the crowd-subset loop; results do not depend on it
};

struct ExactCertificate {
    std::uint64_t subsets_explored = 0;
    std::uint64_t dp_states = 0;
    std::int64_t elapsed_ms = 0;
};

struct ExactResult {
    Solution solution;
    ExactCertificate certificate;
};

// Largest instance the subset tables are allowed to address.
inline constexpr int kExactHardLimit = 16;

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact CVRP over every subset of customers: cheapest single route per capacity-feasible subset
// (Held-Karp), then cheapest partition into at most k routes for k = 0..K. Bit i-1 stands for
// customer i.
class CvrpTables {
  public:
    CvrpTables(const Instance &instance, int max_routes) : instance_(instance), n_(instance.customers()) {
        const std::size_t masks = std::size_t{1} << n_;
        max_routes_ = std::min(max_routes, n_);
        build_routes(masks);
        build_partitions(masks);
    }

    double cvrp(std::uint32_t mask) const { return best_[static_cast<std::size_t>(max_routes_)][mask]; }

    std::vector<Route> routes_for(std::uint32_t mask) const {
        std::vector<Route> routes;
        int k = max_routes_;
        while (mask != 0) {
            const std::uint32_t r = choice_[static_cast<std::size_t>(k)][mask];
            if (r == 0) {
                --k;  // optimum reachable with fewer routes
                continue;
            }
            routes.push_back(route_order(r));
            mask ^= r;
            --k;
        }
        return routes;
    }

    std::uint64_t states() const { return states_; }

  private:
    double &hk(std::size_t mask, int last) { return held_karp_[mask * static_cast<std::size_t>(n_) + static_cast<std::size_t>(last)]; }
    double hk(std::size_t mask, int last) const { return held_karp_[mask * static_cast<std::size_t>(n_) + static_cast<std::size_t>(last)]; }

    void build_routes(std::size_t masks) {
        load_.assign(masks, 0);
        for (std::size_t mask = 1; mask < masks; ++mask) {
            const int low = std::countr_zero(static_cast<std::uint32_t>(mask));
            load_[mask] = load_[mask & (mask - 1)] + instance_.demand(low + 1);
        }
        held_karp_.assign(masks * static_cast<std::size_t>(n_), kInf);
        parent_.assign(masks * static_cast<std::size_t>(n_), -1);
        route_cost_.assign(masks, kInf);
        route_last_.assign(masks, -1);
        for (int i = 0; i < n_; ++i) {
            hk(std::size_t{1} << i, i) = instance_.cost(0, i + 1);
        }
        for (std::size_t mask = 1; mask < masks; ++mask) {
            if (load_[mask] > instance_.capacity()) {
                continue;
            }
            for (int last = 0; last < n_; ++last) {
                if (!(mask & (std::size_t{1} << last))) {
                    continue;
                }
                const std::size_t rest = mask ^ (std::size_t{1} << last);
                if (rest == 0) {
                    ++states_;
                    continue;
                }
                double best = kInf;
                int from = -1;
                for (int prev = 0; prev < n_; ++prev) {
                    if (!(rest & (std::size_t{1} << prev))) {
                        continue;
                    }
                    const double cand = hk(rest, prev) + instance_.cost(prev + 1, last + 1);
                    if (cand < best) {
                        best = cand;
                        from = prev;
                    }
                }
                hk(mask, last) = best;
                parent_[mask * static_cast<std::size_t>(n_) + static_cast<std::size_t>(last)] = from;
                ++states_;
            }
            for (int last = 0; last < n_; ++last) {
                if (!(mask & (std::size_t{1} << last))) {
                    continue;
                }
                const double closed = hk(mask, last) + instance_.cost(last + 1, 0);
                if (closed < route_cost_[mask]) {
                    route_cost_[mask] = closed;
                    route_last_[mask] = last;
                }
            }
        }
    }

    void build_partitions(std::size_t masks) {
        best_.assign(static_cast<std::size_t>(max_routes_) + 1, std::vector<double>(masks, kInf));
        choice_.assign(static_cast<std::size_t>(max_routes_) + 1, std::vector<std::uint32_t>(masks, 0));
        best_[0][0] = 0.0;
        for (int k = 1; k <= max_routes_; ++k) {
            auto &cur = best_[static_cast<std::size_t>(k)];
            const auto &prev = best_[static_cast<std::size_t>(k - 1)];
            auto &pick = choice_[static_cast<std::size_t>(k)];
            cur[0] = 0.0;
            for (std::uint32_t mask = 1; mask < masks; ++mask) {
                double best = prev[mask];
                std::uint32_t chosen = 0;
                const std::uint32_t low = mask & (~mask + 1);
                const std::uint32_t others = mask ^ low;
                // routes containing the lowest customer of the mask
                for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
                    const std::uint32_t r = sub | low;
                    if (route_cost_[r] < kInf) {
                        const double cand = route_cost_[r] + prev[mask ^ r];
                        if (cand < best) {
                            best = cand;
                            chosen = r;
                        }
                    }
                    if (sub == 0) {
                        break;
                    }
                }
                cur[mask] = best;
                pick[mask] = chosen;
                ++states_;
            }
        }
    }

    Route route_order(std::uint32_t mask) const {
        Route reversed;
        std::size_t m = mask;
        int last = route_last_[mask];
        while (last >= 0) {
            reversed.push_back(last + 1);
            const int from = parent_[m * static_cast<std::size_t>(n_) + static_cast<std::size_t>(last)];
            m ^= std::size_t{1} << last;
            last = m == 0 ? -1 : from;
        }
        return {reversed.rbegin(), reversed.rend()};
    }

    const Instance &instance_;
    int n_;
    int max_routes_ = 0;
    std::vector<int> load_;
    std::vector<double> held_karp_;
    std::vector<int> parent_;
    std::vector<double> route_cost_;
    std::vector<int> route_last_;
    std::vector<std::vector<double>> best_;
    std::vector<std::vector<std::uint32_t>> choice_;
    std::uint64_t states_ = 0;
};

} // namespace detail

// Provably optimal solution: every crowd subset W of S is combined with the exact CVRP over the
// remaining customers. Among equal totals the larger W wins, then the lexicographically smaller W.
inline ExactResult solve_exact(const Instance &instance, const ExactConfig &config = {}) {
    if (config.max_customers < 1 || config.max_eligible < 0 || config.threads < 1) {
        throw ConfigError("exact solver limits must be positive");
    }
    const int n = instance.customers();
    const int s = static_cast<int>(instance.eligible().size());
    if (n > config.max_customers || n > kExactHardLimit) {
        throw SizeLimitError("exact solver accepts at most " + std::to_string(std::min(config.max_customers, kExactHardLimit)) +
                             " customers, instance has " + std::to_string(n) + "; use the heuristic");
    }
    if (s > config.max_eligible) {
        throw SizeLimitError("exact solver accepts at most " + std::to_string(config.max_eligible) +
                             " eligible customers, instance has " + std::to_string(s));
    }
    const auto start = std::chrono::steady_clock::now();

    const detail::CvrpTables tables(instance, instance.fleet_size());
    const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1u);
    const std::vector<int> eligible(instance.eligible().begin(), instance.eligible().end());
    const std::size_t subsets = std::size_t{1} << s;

    const auto crowd_mask = [&eligible](std::size_t subset) {
        std::uint32_t w = 0;
        for (std::size_t b = 0; b < eligible.size(); ++b) {
            if (subset & (std::size_t{1} << b)) {
                w |= 1u << (eligible[b] - 1);
            }
        }
        return w;
    };

    std::vector<double> totals(subsets, detail::kInf);
    const auto sweep = [&](std::size_t begin, std::size_t end) {
        for (std::size_t subset = begin; subset < end; ++subset) {
            const std::uint32_t w = crowd_mask(subset);
            const double routing = tables.cvrp(all ^ w);
            if (routing < detail::kInf) {
                totals[subset] = routing + instance.reward() * std::popcount(w);
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(config.threads), subsets));
    if (workers <= 1) {
        sweep(0, subsets);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (subsets + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(sweep, w * chunk, std::min(subsets, (w + 1) * chunk));
        }
    }

    const double best = *std::min_element(totals.begin(), totals.end());
    if (!(best < detail::kInf)) {
        throw InfeasibleError("no assignment into at most " + std::to_string(instance.fleet_size()) +
                              " routes of capacity " + std::to_string(instance.capacity()) + " exists");
    }
    // Tie-break after all candidates are known: larger crowd set, then lexicographically smaller.
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    std::size_t chosen = subsets;
    std::vector<int> chosen_set;
    for (std::size_t subset = 0; subset < subsets; ++subset) {
        if (!(totals[subset] <= best + slack)) {
            continue;
        }
        std::vector<int> w;
        for (std::size_t b = 0; b < eligible.size(); ++b) {
            if (subset & (std::size_t{1} << b)) {
                w.push_back(eligible[b]);
            }
        }
        if (chosen == subsets || w.size() > chosen_set.size() || (w.size() == chosen_set.size() && w < chosen_set)) {
            chosen = subset;
            chosen_set = std::move(w);
        }
    }

    ExactResult result;
    result.solution =
        canonicalize(instance, make_solution(instance, tables.routes_for(all ^ crowd_mask(chosen)), chosen_set));
    result.certificate.subsets_explored = subsets;
    result.certificate.dp_states = tables.states();
    result.certificate.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline constexpr int kBruteForceLimit = 7;

namespace detail {

class BruteForce {
  public:
    explicit BruteForce(const Instance &instance) : instance_(instance) {}

    double run() {
        recurse(1);
        return best_;
    }

  private:
    void recurse(int customer) {
        if (customer > instance_.customers()) {
            const auto costs = solution_cost(instance_, routes_, crowd_);
            best_ = std::min(best_, costs.total);
            return;
        }
        const int q = instance_.demand(customer);
        if (instance_.is_eligible(customer)) {
            crowd_.push_back(customer);
            recurse(customer + 1);
            crowd_.pop_back();
        }
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            if (loads_[r] + q > instance_.capacity()) {
                continue;
            }
            loads_[r] += q;
            for (std::size_t pos = 0; pos <= routes_[r].size(); ++pos) {
                routes_[r].insert(routes_[r].begin() + static_cast<long>(pos), customer);
                recurse(customer + 1);
                routes_[r].erase(routes_[r].begin() + static_cast<long>(pos));
            }
            loads_[r] -= q;
        }
        if (static_cast<int>(routes_.size()) < instance_.fleet_size()) {
            routes_.push_back({customer});
            loads_.push_back(q);
            recurse(customer + 1);
            routes_.pop_back();
            loads_.pop_back();
        }
    }

    const Instance &instance_;
    std::vector<Route> routes_;
    std::vector<int> loads_;
    std::vector<int> crowd_;
    double best_ = kInf;
};

} // namespace detail

// Optimal total cost by enumerating every crowd subset and every set of ordered routes.
// Reference for the exact solver on tiny instances.
inline double brute_force(const Instance &instance) {
    if (instance.customers() > kBruteForceLimit) {
        throw SizeLimitError("brute force accepts at most " + std::to_string(kBruteForceLimit) + " customers");
    }
    const double best = detail::BruteForce(instance).run();
    if (!(best < detail::kInf)) {
        throw InfeasibleError("no feasible assignment exists");
    }
    return best;
}

} // namespace vrpcs
