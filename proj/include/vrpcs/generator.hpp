#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "eligibility.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "rng.hpp"

namespace vrpcs {

inline constexpr int kStationCount = 17;
inline constexpr double kRoadCircuity = 1.3;
inline constexpr double kClusterSigma = 600.0;   // meters
inline constexpr double kClusterShare = 0.6;     // customers drawn around stations
inline constexpr double kBoxInflation = 1.3;     // bounding box growth for the uniform share
inline constexpr std::uint64_t kSceneStream = 0x5CE7E5CE7E5CE7E5ULL;

// Parameter grid of the computational study.
struct GridSpec {
    int customer_count = 100;
    int demand_scenarios = 5;
    std::vector<int> capacities{360, 180, 90, 45};
    int fleet_size = 10;
    std::vector<double> rewards{0.0, 0.5, 1.0, 1.5, 2.0, 5.0};
    std::vector<double> deltas{5.0, 10.0, 15.0};
    std::uint64_t master_seed = 2021;
    double walking_speed = kDefaultWalkingSpeed;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(demand_scenarios) * capacities.size() * rewards.size() * deltas.size();
    }

    void check() const {
        if (customer_count < 1 || demand_scenarios < 1 || fleet_size < 1) {
            throw ConfigError("grid needs positive customer count, scenario count and fleet size");
        }
        if (capacities.empty() || rewards.empty() || deltas.empty()) {
            throw ConfigError("grid parameter sets must be non-empty");
        }
        for (int q : capacities) {
            if (q < 5) {
                throw ConfigError("capacities must hold the largest package (5 units)");
            }
        }
        for (double p : rewards) {
            if (!(p >= 0.0)) {
                throw ConfigError("rewards must be non-negative");
            }
        }
        for (double d : deltas) {
            if (!(d > 0.0)) {
                throw ConfigError("walking thresholds must be positive");
            }
        }
    }
};

inline nlohmann::json grid_spec_to_json(const GridSpec &spec) {
    return {{"customerCount", spec.customer_count}, {"demandScenarios", spec.demand_scenarios},
            {"capacities", spec.capacities},        {"fleetSize", spec.fleet_size},
            {"rewards", spec.rewards},              {"deltas", spec.deltas},
            {"masterSeed", spec.master_seed},       {"walkingSpeed", spec.walking_speed}};
}

inline GridSpec grid_spec_from_json(const nlohmann::json &j) {
    GridSpec spec;
    try {
        spec.customer_count = j.value("customerCount", spec.customer_count);
        spec.demand_scenarios = j.value("demandScenarios", spec.demand_scenarios);
        spec.capacities = j.value("capacities", spec.capacities);
        spec.fleet_size = j.value("fleetSize", spec.fleet_size);
        spec.rewards = j.value("rewards", spec.rewards);
        spec.deltas = j.value("deltas", spec.deltas);
        spec.master_seed = j.value("masterSeed", spec.master_seed);
        spec.walking_speed = j.value("walkingSpeed", spec.walking_speed);
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("grid spec: ") + e.what());
    }
    spec.check();
    return spec;
}

// Point at arc length s along the L-shaped line: north leg down to the corner at the origin,
// then east.
inline std::pair<double, double> point_on_line(double north_leg, double east_leg, double s) {
    if (s <= north_leg) {
        return {0.0, north_leg - s};
    }
    return {std::min(s - north_leg, east_leg), 0.0};
}

// Synthetic metro scene: 17 stations evenly spaced along an L-shaped line, the one nearest the
// middle of the line flagged main (the depot sits there), customers drawn from a mixture of
// station-centred Gaussians and a uniform spread over the inflated bounding box.
inline GeoScene generate_scene(std::uint64_t seed, int customers = 100, double walking_speed = kDefaultWalkingSpeed) {
    CounterRng rng(seed);
    const double north_leg = rng.uniform(5000.0, 8000.0);
    const double east_leg = rng.uniform(5000.0, 8000.0);
    const double total = north_leg + east_leg;

    GeoScene scene;
    scene.walking_speed = walking_speed;
    int main_index = 0;
    double main_gap = INFINITY;
    for (int k = 0; k < kStationCount; ++k) {
        const double s = total * k / (kStationCount - 1);
        const auto [x, y] = point_on_line(north_leg, east_leg, s);
        scene.stations.push_back({k + 1, x, y, false});
        const double gap = std::abs(s - total / 2.0);
        if (gap < main_gap) {
            main_gap = gap;
            main_index = k;
        }
    }
    scene.stations[static_cast<std::size_t>(main_index)].main = true;

    const double cx = east_leg / 2.0, cy = north_leg / 2.0;
    const double hx = kBoxInflation * east_leg / 2.0, hy = kBoxInflation * north_leg / 2.0;
    for (int c = 0; c < customers; ++c) {
        double x, y;
        if (rng.uniform() < kClusterShare) {
            const auto &st = scene.stations[static_cast<std::size_t>(rng.uniform_int(0, kStationCount - 1))];
            x = rng.normal(st.x, kClusterSigma);
            y = rng.normal(st.y, kClusterSigma);
        } else {
            x = rng.uniform(cx - hx, cx + hx);
            y = rng.uniform(cy - hy, cy + hy);
        }
        scene.customers.push_back({c + 1, x, y});
    }
    return scene;
}

// Integer demands uniform on {1..5}.
inline std::vector<int> generate_demands(std::uint64_t seed, int customers) {
    CounterRng rng(seed);
    std::vector<int> q(static_cast<std::size_t>(customers));
    for (auto &v : q) {
        v = static_cast<int>(rng.uniform_int(1, 5));
    }
    return q;
}

// Depot at the main station; costs and lengths are Euclidean distances times the road
// circuity, in kilometers.
inline Instance scene_to_instance(const GeoScene &scene, const std::vector<int> &demands, int capacity, int fleet_size,
                                  double reward, double delta, nlohmann::json meta = nlohmann::json::object()) {
    if (demands.size() != scene.customers.size()) {
        throw InputError("demand vector size does not match the scene's customers");
    }
    const auto eligibility = compute_eligibility(scene, delta);
    const auto &depot = scene.main_station();
    const int n = static_cast<int>(scene.customers.size());
    std::vector<std::pair<double, double>> xy;
    xy.push_back({depot.x, depot.y});
    std::vector<long> ids;
    for (const auto &c : scene.customers) {
        xy.push_back({c.x, c.y});
        ids.push_back(c.id);
    }
    InstanceData data;
    data.customers = n;
    data.cost = Matrix(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < xy.size(); ++i) {
        for (std::size_t j = 0; j < xy.size(); ++j) {
            if (i != j) {
                data.cost(i, j) = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second) / 1000.0 * kRoadCircuity;
            }
        }
    }
    data.length = data.cost;
    data.demand = demands;
    data.capacity = capacity;
    data.fleet_size = fleet_size;
    data.reward = reward;
    data.eligible = eligibility.eligible;
    meta["delta"] = delta;
    meta["walkingSpeed"] = scene.walking_speed;
    meta["roadCircuity"] = kRoadCircuity;
    meta["customerIds"] = ids;
    data.meta = std::move(meta);
    return Instance(std::move(data));
}

struct GridCell {
    int id = 0;
    int scenario = 0;
    int capacity = 0;
    double reward = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0; // demand seed of the scenario
};

// Lazy view of the parameter grid. All cells share one scene; demands depend on the scenario
// only, so cells of one scenario differ only in Q, p and delta.
class Grid {
  public:
    explicit Grid(GridSpec spec) : spec_(std::move(spec)) {
        spec_.check();
        scene_ = generate_scene(scene_seed(spec_.master_seed), spec_.customer_count, spec_.walking_speed);
    }

    static std::uint64_t scene_seed(std::uint64_t master) { return hash_seed(master, kSceneStream); }
    static std::uint64_t scenario_seed(std::uint64_t master, int scenario) {
        return hash_seed(master, static_cast<std::uint64_t>(scenario));
    }

    std::size_t size() const { return spec_.cell_count(); }
    const GridSpec &spec() const { return spec_; }
    const GeoScene &scene() const { return scene_; }

    // Order: scenario, then Q, then p, then delta.
    GridCell cell(std::size_t index) const {
        if (index >= size()) {
            throw InputError("grid cell " + std::to_string(index) + " out of range");
        }
        const std::size_t nd = spec_.deltas.size(), np = spec_.rewards.size(), nq = spec_.capacities.size();
        GridCell c;
        c.id = static_cast<int>(index);
        c.delta = spec_.deltas[index % nd];
        c.reward = spec_.rewards[(index / nd) % np];
        c.capacity = spec_.capacities[(index / (nd * np)) % nq];
        c.scenario = static_cast<int>(index / (nd * np * nq));
        c.seed = scenario_seed(spec_.master_seed, c.scenario);
        return c;
    }

    std::vector<int> demands(int scenario) const {
        return generate_demands(scenario_seed(spec_.master_seed, scenario), spec_.customer_count);
    }

    Instance instance(const GridCell &c) const {
        nlohmann::json meta = {{"cell", c.id}, {"scenario", c.scenario}, {"seed", c.seed}};
        return scene_to_instance(scene_, demands(c.scenario), c.capacity, spec_.fleet_size, c.reward, c.delta, std::move(meta));
    }

    Instance instance(std::size_t index) const { return instance(cell(index)); }

  private:
    GridSpec spec_;
    GeoScene scene_;
};

} // namespace vrpcs
