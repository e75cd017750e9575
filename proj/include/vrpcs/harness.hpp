#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "format.hpp"
#include "generator.hpp"
#include "heuristic.hpp"
#include "rng.hpp"
#include "solution.hpp"
#include "validate.hpp"

namespace vrpcs {

enum class SolverChoice { Exact, Heuristic };

inline const char *solver_name(SolverChoice s) { return s == SolverChoice::Exact ? "exact" : "heuristic"; }

inline SolverChoice parse_solver(const std::string &name) {
    if (name == "exact") {
        return SolverChoice::Exact;
    }
    if (name == "heuristic") {
        return SolverChoice::Heuristic;
    }
    throw ConfigError("unknown solver '" + name + "' (expected exact or heuristic)");
}

struct RunOptions {
    SolverChoice solver = SolverChoice::Heuristic;
    int jobs = 1;
    double budget_seconds = 600.0;  // per cell
    std::uint64_t seed = 0;         // heuristic seed, mixed with the cell id
    int restarts = 10;
    bool keep_solutions = false;
};

struct CellResult {
    GridCell cell;
    std::string solver;
    int customers = 0;
    double total_cost = 0.0;
    double traveling_cost = 0.0;
    double crowd_cost = 0.0;
    int crowd_served = 0;
    int vehicles_used = 0;
    std::int64_t elapsed_ms = 0;
    bool feasible = false;
    std::string error;
    std::optional<Solution> solution;
};

// Solves one instance with the chosen solver and validates the outcome.
inline CellResult solve_cell(const GridCell &cell, const Instance &instance, const RunOptions &options) {
    CellResult out;
    out.cell = cell;
    out.solver = solver_name(options.solver);
    out.customers = instance.customers();
    const auto start = std::chrono::steady_clock::now();
    try {
        Solution s;
        if (options.solver == SolverChoice::Exact) {
            s = solve_exact(instance).solution;
        } else {
            HeuristicConfig config;
            config.seed = hash_seed(options.seed, static_cast<std::uint64_t>(cell.id));
            config.restarts = options.restarts;
            config.budget_seconds = options.budget_seconds;
            s = solve_heuristic(instance, config).solution;
        }
        const auto report = validate(instance, s);
        out.feasible = report.feasible;
        if (!report.feasible) {
            out.error = "validation: " + report.violations.front().message;
        }
        out.total_cost = s.total_cost;
        out.traveling_cost = s.traveling_cost;
        out.crowd_cost = s.crowd_cost;
        out.crowd_served = static_cast<int>(s.crowd.size());
        out.vehicles_used = s.vehicles_used();
        if (options.keep_solutions) {
            out.solution = std::move(s);
        }
    } catch (const std::exception &e) {
        out.feasible = false;
        out.error = e.what();
    }
    out.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return out;
}

using InstanceLoader = std::function<Instance(const GridCell &)>;

// One row per cell, in input order. Cell failures (loading or solving) are recorded, never
// rethrown. Results do not depend on the number of jobs.
inline std::vector<CellResult> run_grid(const std::vector<GridCell> &cells, const InstanceLoader &load,
                                        const RunOptions &options) {
    if (options.jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
    std::vector<CellResult> results(cells.size());
    const auto work = [&](std::size_t k) {
        try {
            results[k] = solve_cell(cells[k], load(cells[k]), options);
        } catch (const std::exception &e) {
            results[k].cell = cells[k];
            results[k].solver = solver_name(options.solver);
            results[k].feasible = false;
            results[k].error = std::string("load: ") + e.what();
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), cells.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            work(k);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < cells.size(); k = next++) {
                    work(k);
                }
            });
        }
    }
    return results;
}

inline std::vector<GridCell> grid_cells(const Grid &grid) {
    std::vector<GridCell> cells;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        cells.push_back(grid.cell(k));
    }
    return cells;
}

// --- manifest and results files ----------------------------------------------------------

inline constexpr const char *kManifestHeader = "cell_id,scenario,Q,p,delta,seed,n,|S|";

inline std::string manifest_csv(const Grid &grid) {
    std::string out = std::string(kManifestHeader) + "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = grid.cell(k);
        const auto eligible = compute_eligibility(grid.scene(), c.delta).eligible.size();
        out += std::to_string(c.id) + "," + std::to_string(c.scenario) + "," + std::to_string(c.capacity) + "," +
               format_number(c.reward) + "," + format_number(c.delta) + "," + std::to_string(c.seed) + "," +
               std::to_string(grid.spec().customer_count) + "," + std::to_string(eligible) + "\n";
    }
    return out;
}

inline std::vector<GridCell> parse_manifest(const std::string &text) {
    const auto table = parse_csv(text);
    const auto id = table.column("cell_id"), sc = table.column("scenario"), q = table.column("Q"),
               p = table.column("p"), d = table.column("delta"), seed = table.column("seed");
    std::vector<GridCell> cells;
    try {
        for (const auto &row : table.rows) {
            GridCell c;
            c.id = std::stoi(row[id]);
            c.scenario = std::stoi(row[sc]);
            c.capacity = std::stoi(row[q]);
            c.reward = std::stod(row[p]);
            c.delta = std::stod(row[d]);
            c.seed = std::stoull(row[seed]);
            cells.push_back(c);
        }
    } catch (const std::logic_error &e) {
        throw InputError(std::string("manifest: bad numeric field (") + e.what() + ")");
    }
    return cells;
}

inline std::string cell_file_stem(int cell_id) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "cell_%04d", cell_id);
    return buffer;
}

inline constexpr const char *kResultsHeader =
    "cell_id,scenario,Q,p,delta,solver,n,totalCost,travelingCost,crowdCost,crowdServed,vehiclesUsed,feasible,error";

// Timing is written separately (timing_csv) so that this file is reproducible byte for byte.
inline std::string results_csv(const std::vector<CellResult> &results) {
    std::string out = std::string(kResultsHeader) + "\n";
    for (const auto &r : results) {
        out += std::to_string(r.cell.id) + "," + std::to_string(r.cell.scenario) + "," + std::to_string(r.cell.capacity) +
               "," + format_number(r.cell.reward) + "," + format_number(r.cell.delta) + "," + r.solver + "," +
               std::to_string(r.customers) + "," + format_number(r.total_cost) + "," + format_number(r.traveling_cost) +
               "," + format_number(r.crowd_cost) + "," + std::to_string(r.crowd_served) + "," +
               std::to_string(r.vehicles_used) + "," + (r.feasible ? "1" : "0") + "," + csv_safe(r.error) + "\n";
    }
    return out;
}

inline std::string timing_csv(const std::vector<CellResult> &results) {
    std::string out = "cell_id,elapsedMs\n";
    for (const auto &r : results) {
        out += std::to_string(r.cell.id) + "," + std::to_string(r.elapsed_ms) + "\n";
    }
    return out;
}

inline std::vector<CellResult> parse_results(const std::string &text) {
    const auto table = parse_csv(text);
    const auto col = [&table](const char *name) { return table.column(name); };
    const std::size_t id = col("cell_id"), sc = col("scenario"), q = col("Q"), p = col("p"), d = col("delta"),
                      solver = col("solver"), n = col("n"), total = col("totalCost"), trav = col("travelingCost"),
                      crowd = col("crowdCost"), served = col("crowdServed"), veh = col("vehiclesUsed"),
                      feas = col("feasible"), err = col("error");
    std::vector<CellResult> out;
    try {
        for (const auto &row : table.rows) {
            CellResult r;
            r.cell.id = std::stoi(row[id]);
            r.cell.scenario = std::stoi(row[sc]);
            r.cell.capacity = std::stoi(row[q]);
            r.cell.reward = std::stod(row[p]);
            r.cell.delta = std::stod(row[d]);
            r.solver = row[solver];
            r.customers = std::stoi(row[n]);
            r.total_cost = std::stod(row[total]);
            r.traveling_cost = std::stod(row[trav]);
            r.crowd_cost = std::stod(row[crowd]);
            r.crowd_served = std::stoi(row[served]);
            r.vehicles_used = std::stoi(row[veh]);
            r.feasible = row[feas] == "1";
            r.error = row[err];
            out.push_back(std::move(r));
        }
    } catch (const std::logic_error &e) {
        throw InputError(std::string("results: bad numeric field (") + e.what() + ")");
    }
    return out;
}

// --- aggregation -------------------------------------------------------------------------

struct AggregateRow {
    double reward = 0.0;
    std::optional<int> capacity; // set when faceted by Q
    double avg_traveling_saving = 0.0;
    double avg_operational_saving = 0.0;
    double avg_vehicles = 0.0;
    int cells = 0;   // cells averaged
    int skipped = 0; // cells left out because they or their baseline failed
};

// Baseline costs per (scenario, Q, delta).
struct BaselineCosts {
    double traveling = 0.0;
    double total = 0.0;
    bool feasible = false;
};
using BaselineKey = std::tuple<int, int, double>;
using BaselineTable = std::map<BaselineKey, BaselineCosts>;

inline BaselineKey baseline_key(const GridCell &c) { return {c.scenario, c.capacity, c.delta}; }

inline bool same_reward(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Baselines taken from the cells solved at the baseline reward (no crowd shipping in practice).
inline BaselineTable baselines_from_results(const std::vector<CellResult> &results, double baseline_reward) {
    BaselineTable table;
    for (const auto &r : results) {
        if (same_reward(r.cell.reward, baseline_reward)) {
            table[baseline_key(r.cell)] = {r.traveling_cost, r.total_cost, r.feasible};
        }
    }
    return table;
}

// Strict CVRP baselines: every (scenario, Q, delta) re-solved with the eligible set forced empty.
inline BaselineTable strict_cvrp_baselines(const std::vector<GridCell> &cells, const InstanceLoader &load,
                                           const RunOptions &options) {
    std::vector<GridCell> keys;
    std::map<BaselineKey, bool> seen;
    for (const auto &c : cells) {
        if (!seen[baseline_key(c)]) {
            seen[baseline_key(c)] = true;
            keys.push_back(c);
        }
    }
    const auto results =
        run_grid(keys, [&load](const GridCell &c) { return load(c).with_eligible({}); }, options);
    BaselineTable table;
    for (const auto &r : results) {
        table[baseline_key(r.cell)] = {r.traveling_cost, r.total_cost, r.feasible};
    }
    return table;
}

inline double relative_saving(double base, double value) {
    if (base == 0.0) {
        return value == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return (base - value) / base;
}

// Averages, for each p (and Q when faceted), the savings of every cell against the baseline of
// its own (scenario, Q, delta). Throws InputError when a cell has no baseline at all.
inline std::vector<AggregateRow> aggregate_against(const std::vector<CellResult> &results, const BaselineTable &baselines,
                                                   bool by_capacity = false) {
    struct Acc {
        double trav = 0.0, oper = 0.0, veh = 0.0;
        int cells = 0, skipped = 0;
    };
    std::map<std::pair<int, double>, Acc> groups; // (Q or 0, p)
    std::vector<const CellResult *> ordered;
    for (const auto &r : results) {
        ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(), [](const CellResult *a, const CellResult *b) { return a->cell.id < b->cell.id; });
    for (const auto *r : ordered) {
        const auto it = baselines.find(baseline_key(r->cell));
        if (it == baselines.end()) {
            throw InputError("cell " + std::to_string(r->cell.id) + " has no baseline cell for scenario " +
                             std::to_string(r->cell.scenario) + ", Q=" + std::to_string(r->cell.capacity) +
                             ", delta=" + format_number(r->cell.delta));
        }
        auto &acc = groups[{by_capacity ? r->cell.capacity : 0, r->cell.reward}];
        if (!r->feasible || !it->second.feasible) {
            ++acc.skipped;
            continue;
        }
        acc.trav += relative_saving(it->second.traveling, r->traveling_cost);
        acc.oper += relative_saving(it->second.total, r->total_cost);
        acc.veh += r->vehicles_used;
        ++acc.cells;
    }
    std::vector<AggregateRow> rows;
    for (const auto &[key, acc] : groups) {
        AggregateRow row;
        row.reward = key.second;
        if (by_capacity) {
            row.capacity = key.first;
        }
        row.cells = acc.cells;
        row.skipped = acc.skipped;
        if (acc.cells > 0) {
            row.avg_traveling_saving = acc.trav / acc.cells;
            row.avg_operational_saving = acc.oper / acc.cells;
            row.avg_vehicles = acc.veh / acc.cells;
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<AggregateRow> aggregate(const std::vector<CellResult> &results, double baseline_reward = 5.0,
                                           bool by_capacity = false) {
    return aggregate_against(results, baselines_from_results(results, baseline_reward), by_capacity);
}

inline std::string aggregate_csv(const std::vector<AggregateRow> &rows) {
    const bool faceted = !rows.empty() && rows.front().capacity.has_value();
    std::string out = faceted ? "Q," : "";
    out += "p,avgTravelingCostSaving,avgOperationalCostSaving,avgVehicles,cells,skipped\n";
    for (const auto &r : rows) {
        if (faceted) {
            out += std::to_string(*r.capacity) + ",";
        }
        out += format_number(r.reward) + "," + format_number(r.avg_traveling_saving) + "," +
               format_number(r.avg_operational_saving) + "," + format_number(r.avg_vehicles) + "," +
               std::to_string(r.cells) + "," + std::to_string(r.skipped) + "\n";
    }
    return out;
}

} // namespace vrpcs
