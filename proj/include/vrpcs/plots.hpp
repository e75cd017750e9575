#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <string>
#include <vector>

#include <json.hpp>

#include "eligibility.hpp"
#include "format.hpp"
#include "harness.hpp"
#include "instance.hpp"
#include "solution.hpp"

namespace vrpcs {

// Long-format table of the per-cell quantities plotted against p, sorted by (p, delta, scenario, Q).
inline std::string long_format_csv(const std::vector<CellResult> &results) {
    std::vector<const CellResult *> rows;
    for (const auto &r : results) {
        if (r.feasible) {
            rows.push_back(&r);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const CellResult *a, const CellResult *b) {
        return std::tuple(a->cell.reward, a->cell.delta, a->cell.scenario, a->cell.capacity, a->cell.id) <
               std::tuple(b->cell.reward, b->cell.delta, b->cell.scenario, b->cell.capacity, b->cell.id);
    });
    std::string out = "p,delta,scenario,Q,cell_id,metric,value\n";
    for (const auto *r : rows) {
        const std::string key = format_number(r->cell.reward) + "," + format_number(r->cell.delta) + "," +
                                std::to_string(r->cell.scenario) + "," + std::to_string(r->cell.capacity) + "," +
                                std::to_string(r->cell.id) + ",";
        out += key + "crowd_shipments," + std::to_string(r->crowd_served) + "\n";
        out += key + "vehicle_traveling_cost," + format_number(r->traveling_cost) + "\n";
        out += key + "total_cost," + format_number(r->total_cost) + "\n";
        out += key + "vehicles," + std::to_string(r->vehicles_used) + "\n";
    }
    return out;
}

// GeoJSON FeatureCollection in the scene's planar frame: one closed LineString per route
// (depot to depot) and one Point per customer tagged with who serves it.
inline nlohmann::json route_geojson(const GeoScene &scene, const Instance &instance, const Solution &solution) {
    using nlohmann::json;
    if (static_cast<int>(scene.customers.size()) != instance.customers()) {
        throw InputError("scene and instance disagree on the number of customers");
    }
    const auto &depot = scene.main_station();
    const auto coord = [&](int node) {
        if (node == 0) {
            return json::array({depot.x, depot.y});
        }
        const auto &c = scene.customers[static_cast<std::size_t>(node - 1)];
        return json::array({c.x, c.y});
    };
    json features = json::array();
    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        json line = json::array();
        line.push_back(coord(0));
        for (int i : solution.routes[r]) {
            line.push_back(coord(i));
        }
        line.push_back(coord(0));
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", std::move(line)}}},
                            {"properties", {{"route", r}, {"customers", solution.routes[r]}}}});
    }
    std::vector<const char *> served_by(static_cast<std::size_t>(instance.customers()) + 1, "vehicle");
    for (int i : solution.crowd) {
        served_by[static_cast<std::size_t>(i)] = "crowd";
    }
    for (int i = 1; i <= instance.customers(); ++i) {
        const auto &c = scene.customers[static_cast<std::size_t>(i - 1)];
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", coord(i)}}},
                            {"properties",
                             {{"node", i},
                              {"id", c.id},
                              {"served_by", served_by[static_cast<std::size_t>(i)]},
                              {"eligible", instance.is_eligible(i)}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

struct PlotBundle {
    std::map<std::string, std::string> files; // relative path -> content
};

// CSV tables for the cost/crowd-shipment charts plus GeoJSON for the selected cells. Cells
// selected for GeoJSON must carry their solution.
inline PlotBundle export_plots(const std::vector<CellResult> &results, const std::vector<AggregateRow> &aggregates,
                               const GeoScene &scene, const std::map<int, Instance> &selected) {
    PlotBundle bundle;
    bundle.files["cells_long.csv"] = long_format_csv(results);
    bundle.files["savings_by_reward.csv"] = aggregate_csv(aggregates);
    for (const auto &r : results) {
        const auto it = selected.find(r.cell.id);
        if (it == selected.end() || !r.solution) {
            continue;
        }
        bundle.files[cell_file_stem(r.cell.id) + ".geojson"] = route_geojson(scene, it->second, *r.solution).dump(1) + "\n";
    }
    return bundle;
}

} // namespace vrpcs
