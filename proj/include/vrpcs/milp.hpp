#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "solution.hpp"

namespace vrpcs {

enum class VarType { Binary, Continuous };
enum class Sense { Equal, LessEqual, GreaterEqual };

struct Variable {
    std::string name;
    VarType type = VarType::Continuous;
    double objective = 0.0;
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    Sense sense = Sense::Equal;
    std::vector<Term> terms; // ascending by variable index
    double rhs = 0.0;
};

// Single-commodity flow formulation of the VRP with crowd-shippers. The objective constant
// p*|S| is kept apart in objective_offset.
struct MilpModel {
    std::string name = "vrpcs";
    int customers = 0;
    std::vector<int> eligible;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    double objective_offset = 0.0;

    int variable_index(const std::string &var_name) const {
        for (std::size_t k = 0; k < variables.size(); ++k) {
            if (variables[k].name == var_name) {
                return static_cast<int>(k);
            }
        }
        return -1;
    }

    const Constraint *find_constraint(const std::string &row_name) const {
        for (const auto &c : constraints) {
            if (c.name == row_name) {
                return &c;
            }
        }
        return nullptr;
    }
};

// Column layout: x row-major over arcs (i,j), i != j, then z over S ascending, then y row-major.
class MilpLayout {
  public:
    MilpLayout(int customers, std::vector<int> eligible) : n_(customers), eligible_(std::move(eligible)) {
        std::sort(eligible_.begin(), eligible_.end());
        z_slot_.assign(static_cast<std::size_t>(n_) + 1, -1);
        for (std::size_t k = 0; k < eligible_.size(); ++k) {
            z_slot_[static_cast<std::size_t>(eligible_[k])] = static_cast<int>(k);
        }
    }
    explicit MilpLayout(const MilpModel &model) : MilpLayout(model.customers, model.eligible) {}

    int arcs() const { return (n_ + 1) * n_; }
    int arc(int i, int j) const { return i * n_ + (j < i ? j : j - 1); }
    int x(int i, int j) const { return arc(i, j); }
    int z(int i) const { return arcs() + z_slot_[static_cast<std::size_t>(i)]; }
    bool has_z(int i) const { return i >= 1 && i <= n_ && z_slot_[static_cast<std::size_t>(i)] >= 0; }
    int y(int i, int j) const { return arcs() + static_cast<int>(eligible_.size()) + arc(i, j); }
    int variables() const { return 2 * arcs() + static_cast<int>(eligible_.size()); }
    int customers() const { return n_; }
    const std::vector<int> &eligible() const { return eligible_; }

  private:
    int n_;
    std::vector<int> eligible_;
    std::vector<int> z_slot_;
};

namespace detail {

inline std::string arc_name(const std::string &prefix, int i, int j) {
    return prefix + "_" + std::to_string(i) + "_" + std::to_string(j);
}

inline Constraint make_row(std::string name, Sense sense, std::vector<Term> terms, double rhs) {
    std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) { return a.var < b.var; });
    return Constraint{std::move(name), sense, std::move(terms), rhs};
}

} // namespace detail

inline MilpModel build_model(const Instance &instance) {
    const int n = instance.customers();
    const MilpLayout layout(n, {instance.eligible().begin(), instance.eligible().end()});
    MilpModel model;
    model.customers = n;
    model.eligible = layout.eligible();
    model.objective_offset = instance.reward() * static_cast<double>(layout.eligible().size());

    model.variables.resize(static_cast<std::size_t>(layout.variables()));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i == j) {
                continue;
            }
            model.variables[static_cast<std::size_t>(layout.x(i, j))] =
                Variable{detail::arc_name("x", i, j), VarType::Binary, instance.cost(i, j)};
            model.variables[static_cast<std::size_t>(layout.y(i, j))] =
                Variable{detail::arc_name("y", i, j), VarType::Continuous, 0.0};
        }
    }
    for (int i : layout.eligible()) {
        model.variables[static_cast<std::size_t>(layout.z(i))] =
            Variable{"z_" + std::to_string(i), VarType::Binary, -instance.reward()};
    }

    auto &rows = model.constraints;
    // degree: out = in = 1 on V, = z_i on S
    for (int i = 1; i <= n; ++i) {
        std::vector<Term> out, in;
        for (int j = 0; j <= n; ++j) {
            if (j != i) {
                out.push_back({layout.x(i, j), 1.0});
                in.push_back({layout.x(j, i), 1.0});
            }
        }
        const bool crowd = layout.has_z(i);
        if (crowd) {
            out.push_back({layout.z(i), -1.0});
            in.push_back({layout.z(i), -1.0});
        }
        rows.push_back(detail::make_row("out_" + std::to_string(i), Sense::Equal, std::move(out), crowd ? 0.0 : 1.0));
        rows.push_back(detail::make_row("in_" + std::to_string(i), Sense::Equal, std::move(in), crowd ? 0.0 : 1.0));
    }
    // depot: out-degree equals in-degree, at most m
    {
        std::vector<Term> balance, fleet;
        for (int j = 1; j <= n; ++j) {
            balance.push_back({layout.x(0, j), 1.0});
            balance.push_back({layout.x(j, 0), -1.0});
            fleet.push_back({layout.x(0, j), 1.0});
        }
        rows.push_back(detail::make_row("depot_balance", Sense::Equal, std::move(balance), 0.0));
        rows.push_back(detail::make_row("fleet", Sense::LessEqual, std::move(fleet),
                                        static_cast<double>(instance.fleet_size())));
    }
    // load balance at customers: inflow - outflow = q_i (or q_i z_i)
    for (int i = 1; i <= n; ++i) {
        std::vector<Term> terms;
        for (int j = 0; j <= n; ++j) {
            if (j != i) {
                terms.push_back({layout.y(j, i), 1.0});
                terms.push_back({layout.y(i, j), -1.0});
            }
        }
        const double q = instance.demand(i);
        double rhs = q;
        if (layout.has_z(i)) {
            terms.push_back({layout.z(i), -q});
            rhs = 0.0;
        }
        rows.push_back(detail::make_row("flow_" + std::to_string(i), Sense::Equal, std::move(terms), rhs));
    }
    // load balance at the depot: inflow - outflow = -(sum_V q_i + sum_S q_i z_i)
    {
        std::vector<Term> terms;
        double vehicle_demand = 0.0;
        for (int j = 1; j <= n; ++j) {
            terms.push_back({layout.y(j, 0), 1.0});
            terms.push_back({layout.y(0, j), -1.0});
            if (layout.has_z(j)) {
                terms.push_back({layout.z(j), static_cast<double>(instance.demand(j))});
            } else {
                vehicle_demand += instance.demand(j);
            }
        }
        rows.push_back(detail::make_row("flow_0", Sense::Equal, std::move(terms), -vehicle_demand));
    }
    // capacity linking y_ij <= Q x_ij
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i != j) {
                rows.push_back(detail::make_row(detail::arc_name("cap", i, j), Sense::LessEqual,
                                                {{layout.y(i, j), 1.0}, {layout.x(i, j), -static_cast<double>(instance.capacity())}},
                                                0.0));
            }
        }
    }
    // vehicles return empty
    for (int i = 1; i <= n; ++i) {
        rows.push_back(detail::make_row("empty_" + std::to_string(i), Sense::Equal, {{layout.y(i, 0), 1.0}}, 0.0));
    }
    return model;
}

// Value assignment for every model column.
using Assignment = std::vector<double>;

// x from route arcs, z_i = 1 iff i is routed, y the load still on board along each arc.
inline Assignment certify(const Instance &instance, const MilpModel &model, const Solution &solution) {
    const MilpLayout layout(model);
    Assignment values(model.variables.size(), 0.0);
    std::vector<bool> routed(static_cast<std::size_t>(instance.customers()) + 1, false);
    for (const auto &route : solution.routes) {
        if (route.empty()) {
            continue;
        }
        double on_board = route_load(instance, route);
        int previous = 0;
        for (int i : route) {
            check_node_range(instance, i, "route");
            values[static_cast<std::size_t>(layout.x(previous, i))] = 1.0;
            values[static_cast<std::size_t>(layout.y(previous, i))] = on_board;
            on_board -= instance.demand(i);
            routed[static_cast<std::size_t>(i)] = true;
            previous = i;
        }
        values[static_cast<std::size_t>(layout.x(previous, 0))] = 1.0;
        values[static_cast<std::size_t>(layout.y(previous, 0))] = on_board;
    }
    for (int i : layout.eligible()) {
        values[static_cast<std::size_t>(layout.z(i))] = routed[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    return values;
}

struct RowViolation {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ModelEvaluation {
    double objective = 0.0; // including the offset
    std::vector<RowViolation> violated_rows;
    std::vector<std::string> violated_bounds;
    bool feasible() const { return violated_rows.empty() && violated_bounds.empty(); }
};

inline ModelEvaluation evaluate(const MilpModel &model, const Assignment &values, double tolerance = 1e-9) {
    if (values.size() != model.variables.size()) {
        throw InputError("assignment size does not match the model");
    }
    ModelEvaluation eval;
    eval.objective = model.objective_offset;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto &var = model.variables[k];
        eval.objective += var.objective * values[k];
        const double v = values[k];
        const bool ok = var.type == VarType::Binary ? (v == 0.0 || v == 1.0) : v >= -tolerance;
        if (!ok) {
            eval.violated_bounds.push_back(var.name);
        }
    }
    for (const auto &row : model.constraints) {
        double lhs = 0.0;
        double scale = std::abs(row.rhs);
        for (const auto &t : row.terms) {
            lhs += t.coef * values[static_cast<std::size_t>(t.var)];
            scale = std::max(scale, std::abs(t.coef * values[static_cast<std::size_t>(t.var)]));
        }
        const double slack = tolerance * std::max(1.0, scale);
        bool ok = true;
        switch (row.sense) {
        case Sense::Equal: ok = std::abs(lhs - row.rhs) <= slack; break;
        case Sense::LessEqual: ok = lhs <= row.rhs + slack; break;
        case Sense::GreaterEqual: ok = lhs >= row.rhs - slack; break;
        }
        if (!ok) {
            eval.violated_rows.push_back({row.name, lhs, row.rhs});
        }
    }
    return eval;
}

// Recovers depot-rooted routes and the crowd set from an integral assignment. Throws InputError
// when the selected arcs do not form simple depot cycles.
inline Solution decompose(const Instance &instance, const MilpModel &model, const Assignment &values) {
    const MilpLayout layout(model);
    const int n = instance.customers();
    const auto chosen = [&](int i, int j) { return values[static_cast<std::size_t>(layout.x(i, j))] > 0.5; };
    std::vector<int> successor(static_cast<std::size_t>(n) + 1, -1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (j != i && chosen(i, j)) {
                if (successor[static_cast<std::size_t>(i)] != -1) {
                    throw InputError("customer " + std::to_string(i) + " has two outgoing arcs");
                }
                successor[static_cast<std::size_t>(i)] = j;
            }
        }
    }
    std::vector<Route> routes;
    std::vector<bool> visited(static_cast<std::size_t>(n) + 1, false);
    for (int j = 1; j <= n; ++j) {
        if (!chosen(0, j)) {
            continue;
        }
        Route route;
        int at = j;
        while (at != 0) {
            if (at < 0 || visited[static_cast<std::size_t>(at)]) {
                throw InputError("arcs out of the depot do not close into a simple route");
            }
            visited[static_cast<std::size_t>(at)] = true;
            route.push_back(at);
            at = successor[static_cast<std::size_t>(at)];
        }
        routes.push_back(std::move(route));
    }
    std::vector<int> crowd;
    for (int i = 1; i <= n; ++i) {
        if (visited[static_cast<std::size_t>(i)]) {
            continue;
        }
        if (successor[static_cast<std::size_t>(i)] != -1) {
            throw InputError("customer " + std::to_string(i) + " lies on a subtour");
        }
        if (!layout.has_z(i) || values[static_cast<std::size_t>(layout.z(i))] > 0.5) {
            throw InputError("customer " + std::to_string(i) + " is neither routed nor crowd-served");
        }
        crowd.push_back(i);
    }
    return make_solution(instance, std::move(routes), std::move(crowd));
}

} // namespace vrpcs
