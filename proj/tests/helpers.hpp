#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <vrpcs/vrpcs.hpp>

namespace vrpcs::testing {

struct RandomOptions {
    bool metric = true;          // Euclidean; otherwise independent random arc costs
    double eligible_share = 0.5;
    int min_capacity = 5;
    int max_capacity = 15;
    bool reward_from_grid = true; // p drawn from {0, .5, 1, 1.5, 2, 5}
};

// Random instance on a 10 km square; the fleet always suffices for a bin-packing of the demand.
inline Instance random_instance(std::uint64_t seed, int n, const RandomOptions &opt = {}) {
    CounterRng rng(seed);
    InstanceData data;
    data.customers = n;
    const auto dim = static_cast<std::size_t>(n) + 1;
    std::vector<std::pair<double, double>> xy(dim);
    for (auto &p : xy) {
        p = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
    }
    data.cost = Matrix(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (i == j) {
                continue;
            }
            data.cost(i, j) = opt.metric ? std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second)
                                         : rng.uniform(0.5, 10.0);
        }
    }
    data.length = data.cost;
    int total = 0;
    for (int i = 0; i < n; ++i) {
        data.demand.push_back(static_cast<int>(rng.uniform_int(1, 5)));
        total += data.demand.back();
    }
    data.capacity = static_cast<int>(rng.uniform_int(opt.min_capacity, opt.max_capacity));
    const int needed = (total + data.capacity - 1) / data.capacity;
    data.fleet_size = std::min(n, needed + static_cast<int>(rng.uniform_int(1, 2)));
    for (int i = 1; i <= n; ++i) {
        if (rng.uniform() < opt.eligible_share) {
            data.eligible.push_back(i);
        }
    }
    static const double rewards[] = {0.0, 0.5, 1.0, 1.5, 2.0, 5.0};
    data.reward = opt.reward_from_grid ? rewards[rng.uniform_int(0, 5)] : rng.uniform(0.0, 6.0);
    return Instance(std::move(data));
}

// Complete graph where every arc costs `arc`.
inline Instance uniform_instance(int n, double arc, std::vector<int> demand, int capacity, int fleet, double reward,
                                 std::vector<int> eligible) {
    InstanceData data;
    data.customers = n;
    data.cost = Matrix(static_cast<std::size_t>(n) + 1, arc);
    for (int i = 0; i <= n; ++i) {
        data.cost(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 0.0;
    }
    data.length = data.cost;
    data.demand = std::move(demand);
    data.capacity = capacity;
    data.fleet_size = fleet;
    data.reward = reward;
    data.eligible = std::move(eligible);
    return Instance(std::move(data));
}

// The two-customer example: all arcs cost 2, q = (1, 1), Q = 10, m = 1, S = {1, 2}.
inline Instance two_customer_example(double reward) { return uniform_instance(2, 2.0, {1, 1}, 10, 1, reward, {1, 2}); }

// Sub-instance on the depot plus `keep` (renumbered 1..k in order), nothing crowd-eligible.
inline Instance restrict_to(const Instance &in, const std::vector<int> &keep) {
    std::vector<int> nodes{0};
    nodes.insert(nodes.end(), keep.begin(), keep.end());
    InstanceData data;
    data.customers = static_cast<int>(keep.size());
    data.cost = Matrix(nodes.size());
    data.length = Matrix(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            if (a != b) {
                data.cost(a, b) = in.cost(nodes[a], nodes[b]);
                data.length(a, b) = in.length(nodes[a], nodes[b]);
            }
        }
    }
    for (int i : keep) {
        data.demand.push_back(in.demand(i));
    }
    data.capacity = in.capacity();
    data.fleet_size = in.fleet_size();
    data.reward = in.reward();
    return Instance(std::move(data));
}

} // namespace vrpcs::testing
