#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace vrpcs {

struct Site {
    long id = 0;
    double x = 0.0; // meters, projected frame
    double y = 0.0;
};

struct Station {
    long id = 0;
    double x = 0.0;
    double y = 0.0;
    bool main = false;
};

inline constexpr double kDefaultWalkingSpeed = 80.0; // meters per minute

// Customers and metro stations in one planar frame. Customer k of the list becomes node k+1.
struct GeoScene {
    std::vector<Site> customers;
    std::vector<Station> stations;
    double walking_speed = kDefaultWalkingSpeed;

    const Station &main_station() const {
        for (const auto &s : stations) {
            if (s.main) {
                return s;
            }
        }
        throw ConfigError("scene has no main station");
    }
};

inline void check_scene(const GeoScene &scene) {
    if (scene.stations.empty()) {
        throw ConfigError("scene has no stations");
    }
    const auto mains = std::count_if(scene.stations.begin(), scene.stations.end(), [](const Station &s) { return s.main; });
    if (mains != 1) {
        throw ConfigError("scene must flag exactly one main station, found " + std::to_string(mains));
    }
    if (!(scene.walking_speed > 0.0) || !std::isfinite(scene.walking_speed)) {
        throw ConfigError("walking speed must be positive");
    }
    for (const auto &c : scene.customers) {
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw ConfigError("customer " + std::to_string(c.id) + " has non-finite coordinates");
        }
    }
    for (const auto &s : scene.stations) {
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
            throw ConfigError("station " + std::to_string(s.id) + " has non-finite coordinates");
        }
    }
}

// Walking minutes from each customer to its nearest station; index k is customer node k+1.
struct EligibilityMap {
    std::vector<double> walk_minutes;
};

struct EligibilityResult {
    EligibilityMap map;
    std::vector<int> eligible; // customer nodes, ascending
};

// Straight-line distance to the nearest station (any station, main included) divided by
// the walking speed. Boundary inclusive: walk_minutes == delta is eligible.
inline EligibilityResult compute_eligibility(const GeoScene &scene, double delta) {
    if (!(delta > 0.0)) {
        throw ConfigError("walking threshold delta must be positive");
    }
    check_scene(scene);
    EligibilityResult out;
    out.map.walk_minutes.reserve(scene.customers.size());
    for (std::size_t k = 0; k < scene.customers.size(); ++k) {
        const auto &c = scene.customers[k];
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto &s : scene.stations) {
            nearest = std::min(nearest, std::hypot(c.x - s.x, c.y - s.y));
        }
        const double minutes = nearest / scene.walking_speed;
        out.map.walk_minutes.push_back(minutes);
        if (minutes <= delta) {
            out.eligible.push_back(static_cast<int>(k) + 1);
        }
    }
    return out;
}

// Accepts an externally computed eligible set verbatim (e.g. from network isochrones).
inline std::vector<int> ingest_eligibility(int customers, const std::vector<int> &ids) {
    std::vector<bool> seen(static_cast<std::size_t>(std::max(customers, 0)) + 1, false);
    for (int id : ids) {
        if (id < 1 || id > customers) {
            throw InputError("eligible id " + std::to_string(id) + " outside 1.." + std::to_string(customers));
        }
        if (seen[static_cast<std::size_t>(id)]) {
            throw InputError("eligible id " + std::to_string(id) + " listed twice");
        }
        seen[static_cast<std::size_t>(id)] = true;
    }
    return ids;
}

inline nlohmann::json scene_to_json(const GeoScene &scene) {
    nlohmann::json j;
    auto &customers = j["customers"] = nlohmann::json::array();
    for (const auto &c : scene.customers) {
        customers.push_back({{"id", c.id}, {"x", c.x}, {"y", c.y}});
    }
    auto &stations = j["stations"] = nlohmann::json::array();
    for (const auto &s : scene.stations) {
        stations.push_back({{"id", s.id}, {"x", s.x}, {"y", s.y}, {"main", s.main}});
    }
    j["walkingSpeed"] = scene.walking_speed;
    return j;
}

inline GeoScene scene_from_json(const nlohmann::json &j) {
    GeoScene scene;
    try {
        for (const auto &c : j.at("customers")) {
            scene.customers.push_back({c.at("id").get<long>(), c.at("x").get<double>(), c.at("y").get<double>()});
        }
        for (const auto &s : j.at("stations")) {
            scene.stations.push_back({s.at("id").get<long>(), s.at("x").get<double>(), s.at("y").get<double>(),
                                      s.value("main", false)});
        }
        scene.walking_speed = j.value("walkingSpeed", kDefaultWalkingSpeed);
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("scene JSON: ") + e.what());
    }
    check_scene(scene);
    return scene;
}

} // namespace vrpcs
