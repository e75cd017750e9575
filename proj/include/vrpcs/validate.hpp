#pragma once

#include <string>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"

namespace vrpcs {

enum class ViolationKind {
    EmptyRoute,
    RepeatedCustomer,
    CapacityExceeded,
    TooManyRoutes,
    Unserved,
    ServedTwice,
    CrowdNotEligible,
    CostMismatch,
};

inline const char *to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::EmptyRoute: return "empty-route";
    case ViolationKind::RepeatedCustomer: return "repeated-customer";
    case ViolationKind::CapacityExceeded: return "capacity-exceeded";
    case ViolationKind::TooManyRoutes: return "too-many-routes";
    case ViolationKind::Unserved: return "unserved";
    case ViolationKind::ServedTwice: return "served-twice";
    case ViolationKind::CrowdNotEligible: return "crowd-not-eligible";
    case ViolationKind::CostMismatch: return "cost-mismatch";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    bool feasible = true;
    std::vector<Violation> violations;
    CostBreakdown recomputed;

    bool has(ViolationKind kind) const {
        for (const auto &v : violations) {
            if (v.kind == kind) {
                return true;
            }
        }
        return false;
    }
};

// Checks coverage, capacity, fleet size and crowd eligibility, and recomputes every cost from
// the routes. Throws StructuralError for node indices outside 1..n.
inline ValidationReport validate(const Instance &instance, const Solution &solution) {
    ValidationReport report;
    report.recomputed = solution_cost(instance, solution.routes, solution.crowd);

    auto flag = [&report](ViolationKind kind, std::string message) {
        report.feasible = false;
        report.violations.push_back({kind, std::move(message)});
    };

    const int n = instance.customers();
    std::vector<int> times_served(static_cast<std::size_t>(n) + 1, 0);

    if (solution.vehicles_used() > instance.fleet_size()) {
        flag(ViolationKind::TooManyRoutes, std::to_string(solution.vehicles_used()) + " routes exceed fleet size " +
                                               std::to_string(instance.fleet_size()));
    }
    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        const auto &route = solution.routes[r];
        if (route.empty()) {
            flag(ViolationKind::EmptyRoute, "route " + std::to_string(r) + " is empty");
            continue;
        }
        std::vector<bool> in_route(static_cast<std::size_t>(n) + 1, false);
        for (int i : route) {
            if (in_route[static_cast<std::size_t>(i)]) {
                flag(ViolationKind::RepeatedCustomer,
                     "customer " + std::to_string(i) + " repeats in route " + std::to_string(r));
            }
            in_route[static_cast<std::size_t>(i)] = true;
            ++times_served[static_cast<std::size_t>(i)];
        }
        const int load = route_load(instance, route);
        if (load > instance.capacity()) {
            flag(ViolationKind::CapacityExceeded, "route " + std::to_string(r) + " load " + std::to_string(load) +
                                                      " exceeds capacity " + std::to_string(instance.capacity()));
        }
    }
    for (int i : solution.crowd) {
        ++times_served[static_cast<std::size_t>(i)];
        if (!instance.is_eligible(i)) {
            flag(ViolationKind::CrowdNotEligible, "customer " + std::to_string(i) + " is not crowd-eligible");
        }
    }
    for (int i = 1; i <= n; ++i) {
        const int count = times_served[static_cast<std::size_t>(i)];
        if (count == 0) {
            flag(ViolationKind::Unserved, "customer " + std::to_string(i) + " is not served");
        } else if (count > 1) {
            flag(ViolationKind::ServedTwice, "customer " + std::to_string(i) + " is served " + std::to_string(count) +
                                                 " times");
        }
    }

    const auto &r = report.recomputed;
    const auto check_cost = [&](const char *name, double stored, double recomputed) {
        if (!costs_match(stored, recomputed)) {
            flag(ViolationKind::CostMismatch, std::string(name) + " " + std::to_string(stored) +
                                                  " differs from recomputed " + std::to_string(recomputed));
        }
    };
    check_cost("travelingCost", solution.traveling_cost, r.traveling);
    check_cost("crowdCost", solution.crowd_cost, r.crowd);
    check_cost("totalCost", solution.total_cost, r.total);
    if (!costs_match(solution.total_cost, solution.traveling_cost + solution.crowd_cost)) {
        flag(ViolationKind::CostMismatch, "totalCost is not travelingCost + crowdCost");
    }
    return report;
}

} // namespace vrpcs
