#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace vrpcs {

// Customer sequence of one vehicle; the depot is implicit at both ends.
using Route = std::vector<int>;

struct CostBreakdown {
    double traveling = 0.0;
    double crowd = 0.0;
    double total = 0.0;
};

struct Solution {
    std::vector<Route> routes;
    std::vector<int> crowd; // customers handed to crowd-shippers, ascending
    double traveling_cost = 0.0;
    double crowd_cost = 0.0;
    double total_cost = 0.0;

    CostBreakdown costs() const { return {traveling_cost, crowd_cost, total_cost}; }
    int vehicles_used() const { return static_cast<int>(routes.size()); }
};

// Absolute tolerance 1e-9 scaled by the magnitude of the compared totals.
inline bool costs_match(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-9 * scale;
}

inline void check_node_range(const Instance &instance, int node, const char *where) {
    if (!instance.valid_customer(node)) {
        throw StructuralError(std::string(where) + " references node " + std::to_string(node) +
                              ", valid customers are 1.." + std::to_string(instance.customers()));
    }
}

inline double route_cost(const Instance &instance, std::span<const int> route) {
    if (route.empty()) {
        return 0.0;
    }
    double sum = instance.cost(0, route.front());
    for (std::size_t k = 1; k < route.size(); ++k) {
        sum += instance.cost(route[k - 1], route[k]);
    }
    sum += instance.cost(route.back(), 0);
    return sum;
}

inline int route_load(const Instance &instance, std::span<const int> route) {
    int load = 0;
    for (int i : route) {
        load += instance.demand(i);
    }
    return load;
}

// Route-arc sum plus reward times the number of crowd shipments.
inline CostBreakdown solution_cost(const Instance &instance, std::span<const Route> routes, std::span<const int> crowd) {
    for (const auto &route : routes) {
        for (int i : route) {
            check_node_range(instance, i, "route");
        }
    }
    for (int i : crowd) {
        check_node_range(instance, i, "crowd set");
    }
    CostBreakdown out;
    for (const auto &route : routes) {
        out.traveling += route_cost(instance, route);
    }
    out.crowd = instance.reward() * static_cast<double>(crowd.size());
    out.total = out.traveling + out.crowd;
    return out;
}

// Builds a solution with its cost fields filled in from scratch.
inline Solution make_solution(const Instance &instance, std::vector<Route> routes, std::vector<int> crowd) {
    std::sort(crowd.begin(), crowd.end());
    const auto costs = solution_cost(instance, routes, crowd);
    Solution s;
    s.routes = std::move(routes);
    s.crowd = std::move(crowd);
    s.traveling_cost = costs.traveling;
    s.crowd_cost = costs.crowd;
    s.total_cost = costs.total;
    return s;
}

// Canonical form: with symmetric costs each route runs from its smaller end, routes are sorted
// lexicographically and the crowd set ascending. Costs are recomputed.
inline Solution canonicalize(const Instance &instance, Solution s) {
    for (auto &route : s.routes) {
        if (instance.symmetric_costs() && route.size() > 1 && route.back() < route.front()) {
            std::reverse(route.begin(), route.end());
        }
    }
    std::sort(s.routes.begin(), s.routes.end());
    return make_solution(instance, std::move(s.routes), std::move(s.crowd));
}

// Total order used to pick among equal-cost candidates.
inline bool canonical_less(const Solution &a, const Solution &b) {
    if (a.routes != b.routes) {
        return a.routes < b.routes;
    }
    return a.crowd < b.crowd;
}

} // namespace vrpcs
