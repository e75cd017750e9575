#pragma once

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "solution.hpp"

namespace vrpcs {

// Mutable routing plan used by the local search.
struct RoutingState {
    std::vector<Route> routes;
    std::vector<int> loads;
    std::vector<int> crowd;

    static RoutingState from_solution(const Instance &instance, const Solution &s) {
        RoutingState state;
        state.routes = s.routes;
        for (const auto &r : state.routes) {
            state.loads.push_back(route_load(instance, r));
        }
        state.crowd = s.crowd;
        return state;
    }

    Solution to_solution(const Instance &instance) const { return make_solution(instance, routes, crowd); }

    double total_cost(const Instance &instance) const { return solution_cost(instance, routes, crowd).total; }

    int route_count() const { return static_cast<int>(routes.size()); }
};

// Hand customer routes[route][pos] to a crowd-shipper.
struct CrowdRemove {
    int route = 0;
    int pos = 0;
};

// Put crowd customer back on a vehicle before routes[route][pos]; route == route_count opens a new route.
struct CrowdInsert {
    int customer = 0;
    int route = 0;
    int pos = 0;
};

// Move routes[from_route][from_pos] to position to_pos of to_route (indexing after removal when
// the route is the same). to_route == route_count opens a new route.
struct Relocate {
    int from_route = 0;
    int from_pos = 0;
    int to_route = 0;
    int to_pos = 0;
};

// Exchange the customers at two positions.
struct Swap {
    int route_a = 0;
    int pos_a = 0;
    int route_b = 0;
    int pos_b = 0;
};

// Reverse routes[route][first..last].
struct TwoOpt {
    int route = 0;
    int first = 0;
    int last = 0;
};

using Move = std::variant<CrowdRemove, CrowdInsert, Relocate, Swap, TwoOpt>;

inline std::string move_name(const Move &move) {
    static const char *names[] = {"crowd-remove", "crowd-insert", "relocate", "swap", "2-opt"};
    return names[move.index()];
}

namespace detail {

class InvalidMove : public InputError {
  public:
    using InputError::InputError;
};

inline void check_route(const RoutingState &s, int route, bool allow_new) {
    const int limit = s.route_count() + (allow_new ? 1 : 0);
    if (route < 0 || route >= limit) {
        throw InvalidMove("route index " + std::to_string(route) + " out of range");
    }
}

inline void check_pos(const RoutingState &s, int route, int pos, bool allow_end) {
    const int size = static_cast<int>(s.routes[static_cast<std::size_t>(route)].size()) + (allow_end ? 1 : 0);
    if (pos < 0 || pos >= size) {
        throw InvalidMove("position " + std::to_string(pos) + " out of range in route " + std::to_string(route));
    }
}

inline int before(const Route &r, int pos) { return pos == 0 ? 0 : r[static_cast<std::size_t>(pos - 1)]; }
inline int after(const Route &r, int pos) { return pos + 1 >= static_cast<int>(r.size()) ? 0 : r[static_cast<std::size_t>(pos + 1)]; }

// Detour saved by removing routes[pos] from its neighbours.
inline double removal_gain(const Instance &in, const Route &r, int pos) {
    const int a = before(r, pos);
    const int i = r[static_cast<std::size_t>(pos)];
    const int b = after(r, pos);
    return in.cost(a, i) + in.cost(i, b) - in.cost(a, b);
}

// Detour added by inserting customer i before r[pos] (pos == size appends).
inline double insertion_cost(const Instance &in, const Route &r, int pos, int i) {
    const int a = pos == 0 ? 0 : r[static_cast<std::size_t>(pos - 1)];
    const int b = pos == static_cast<int>(r.size()) ? 0 : r[static_cast<std::size_t>(pos)];
    return in.cost(a, i) + in.cost(i, b) - in.cost(a, b);
}

inline bool in_crowd(const RoutingState &s, int customer) {
    return std::find(s.crowd.begin(), s.crowd.end(), customer) != s.crowd.end();
}

} // namespace detail

// Signed change of the total cost caused by the move. Capacity and fleet limits are not part of
// the delta; the caller checks them. Throws InputError on invalid coordinates.
inline double neighborhood_delta(const Move &move, const RoutingState &s, const Instance &in) {
    using namespace detail;
    return std::visit(
        [&](const auto &m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CrowdRemove>) {
                check_route(s, m.route, false);
                check_pos(s, m.route, m.pos, false);
                const int i = s.routes[static_cast<std::size_t>(m.route)][static_cast<std::size_t>(m.pos)];
                if (!in.is_eligible(i)) {
                    throw InvalidMove("customer " + std::to_string(i) + " is not crowd-eligible");
                }
                return in.reward() - removal_gain(in, s.routes[static_cast<std::size_t>(m.route)], m.pos);
            } else if constexpr (std::is_same_v<M, CrowdInsert>) {
                if (!in_crowd(s, m.customer)) {
                    throw InvalidMove("customer " + std::to_string(m.customer) + " is not crowd-served");
                }
                check_route(s, m.route, true);
                if (m.route == s.route_count()) {
                    return in.out_and_back(m.customer) - in.reward();
                }
                check_pos(s, m.route, m.pos, true);
                return insertion_cost(in, s.routes[static_cast<std::size_t>(m.route)], m.pos, m.customer) - in.reward();
            } else if constexpr (std::is_same_v<M, Relocate>) {
                check_route(s, m.from_route, false);
                check_pos(s, m.from_route, m.from_pos, false);
                check_route(s, m.to_route, true);
                const auto &from = s.routes[static_cast<std::size_t>(m.from_route)];
                const int i = from[static_cast<std::size_t>(m.from_pos)];
                if (m.to_route == m.from_route) {
                    if (m.to_pos < 0 || m.to_pos >= static_cast<int>(from.size())) {
                        throw InvalidMove("relocate target position out of range");
                    }
                    Route moved = from;
                    moved.erase(moved.begin() + m.from_pos);
                    moved.insert(moved.begin() + m.to_pos, i);
                    return route_cost(in, moved) - route_cost(in, from);
                }
                const double gain = removal_gain(in, from, m.from_pos);
                if (m.to_route == s.route_count()) {
                    return in.out_and_back(i) - gain;
                }
                check_pos(s, m.to_route, m.to_pos, true);
                return insertion_cost(in, s.routes[static_cast<std::size_t>(m.to_route)], m.to_pos, i) - gain;
            } else if constexpr (std::is_same_v<M, Swap>) {
                check_route(s, m.route_a, false);
                check_route(s, m.route_b, false);
                check_pos(s, m.route_a, m.pos_a, false);
                check_pos(s, m.route_b, m.pos_b, false);
                const auto &ra = s.routes[static_cast<std::size_t>(m.route_a)];
                const auto &rb = s.routes[static_cast<std::size_t>(m.route_b)];
                const int i = ra[static_cast<std::size_t>(m.pos_a)];
                const int j = rb[static_cast<std::size_t>(m.pos_b)];
                if (m.route_a == m.route_b) {
                    Route swapped = ra;
                    std::swap(swapped[static_cast<std::size_t>(m.pos_a)], swapped[static_cast<std::size_t>(m.pos_b)]);
                    return route_cost(in, swapped) - route_cost(in, ra);
                }
                const int a1 = before(ra, m.pos_a), b1 = after(ra, m.pos_a);
                const int a2 = before(rb, m.pos_b), b2 = after(rb, m.pos_b);
                return in.cost(a1, j) + in.cost(j, b1) - in.cost(a1, i) - in.cost(i, b1) + in.cost(a2, i) +
                       in.cost(i, b2) - in.cost(a2, j) - in.cost(j, b2);
            } else {
                check_route(s, m.route, false);
                check_pos(s, m.route, m.first, false);
                check_pos(s, m.route, m.last, false);
                if (m.first > m.last) {
                    throw InvalidMove("2-opt segment is reversed");
                }
                const auto &r = s.routes[static_cast<std::size_t>(m.route)];
                const int a = before(r, m.first);
                const int b = after(r, m.last);
                double delta = in.cost(a, r[static_cast<std::size_t>(m.last)]) + in.cost(r[static_cast<std::size_t>(m.first)], b) -
                               in.cost(a, r[static_cast<std::size_t>(m.first)]) - in.cost(r[static_cast<std::size_t>(m.last)], b);
                if (!in.symmetric_costs()) {
                    for (int k = m.first; k < m.last; ++k) {
                        const int u = r[static_cast<std::size_t>(k)];
                        const int v = r[static_cast<std::size_t>(k + 1)];
                        delta += in.cost(v, u) - in.cost(u, v);
                    }
                }
                return delta;
            }
        },
        move);
}

// Applies a move in place; routes left empty are dropped.
inline void apply_move(const Move &move, RoutingState &s, const Instance &in) {
    neighborhood_delta(move, s, in); // validates coordinates
    const auto drop_if_empty = [&s](int route) {
        if (s.routes[static_cast<std::size_t>(route)].empty()) {
            s.routes.erase(s.routes.begin() + route);
            s.loads.erase(s.loads.begin() + route);
        }
    };
    const auto open_route = [&s]() {
        s.routes.emplace_back();
        s.loads.push_back(0);
    };
    std::visit(
        [&](const auto &m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CrowdRemove>) {
                auto &r = s.routes[static_cast<std::size_t>(m.route)];
                const int i = r[static_cast<std::size_t>(m.pos)];
                r.erase(r.begin() + m.pos);
                s.loads[static_cast<std::size_t>(m.route)] -= in.demand(i);
                s.crowd.insert(std::upper_bound(s.crowd.begin(), s.crowd.end(), i), i);
                drop_if_empty(m.route);
            } else if constexpr (std::is_same_v<M, CrowdInsert>) {
                if (m.route == s.route_count()) {
                    open_route();
                }
                auto &r = s.routes[static_cast<std::size_t>(m.route)];
                r.insert(r.begin() + m.pos, m.customer);
                s.loads[static_cast<std::size_t>(m.route)] += in.demand(m.customer);
                s.crowd.erase(std::find(s.crowd.begin(), s.crowd.end(), m.customer));
            } else if constexpr (std::is_same_v<M, Relocate>) {
                const int i = s.routes[static_cast<std::size_t>(m.from_route)][static_cast<std::size_t>(m.from_pos)];
                if (m.to_route == s.route_count()) {
                    open_route();
                }
                auto &from = s.routes[static_cast<std::size_t>(m.from_route)];
                from.erase(from.begin() + m.from_pos);
                s.loads[static_cast<std::size_t>(m.from_route)] -= in.demand(i);
                auto &to = s.routes[static_cast<std::size_t>(m.to_route)];
                to.insert(to.begin() + m.to_pos, i);
                s.loads[static_cast<std::size_t>(m.to_route)] += in.demand(i);
                drop_if_empty(m.from_route);
            } else if constexpr (std::is_same_v<M, Swap>) {
                auto &ra = s.routes[static_cast<std::size_t>(m.route_a)];
                auto &rb = s.routes[static_cast<std::size_t>(m.route_b)];
                const int i = ra[static_cast<std::size_t>(m.pos_a)];
                const int j = rb[static_cast<std::size_t>(m.pos_b)];
                std::swap(ra[static_cast<std::size_t>(m.pos_a)], rb[static_cast<std::size_t>(m.pos_b)]);
                s.loads[static_cast<std::size_t>(m.route_a)] += in.demand(j) - in.demand(i);
                s.loads[static_cast<std::size_t>(m.route_b)] += in.demand(i) - in.demand(j);
            } else {
                auto &r = s.routes[static_cast<std::size_t>(m.route)];
                std::reverse(r.begin() + m.first, r.begin() + m.last + 1);
            }
        },
        move);
}

} // namespace vrpcs
