#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "instance.hpp"
#include "solution.hpp"
#include "validate.hpp"

namespace vrpcs {

using nlohmann::json;

namespace detail {

inline const json &require(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

template <typename T>
T get_as(const json &j, const char *key) {
    try {
        return require(j, key).get<T>();
    } catch (const json::exception &e) {
        throw InputError(std::string("field \"") + key + "\": " + e.what());
    }
}

inline Matrix matrix_from_json(const json &j, const char *key, std::size_t dim) {
    const auto &rows = require(j, key);
    if (!rows.is_array() || rows.size() != dim) {
        throw InputError(std::string("field \"") + key + "\" must be a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " array");
    }
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!rows[i].is_array() || rows[i].size() != dim) {
            throw InputError(std::string("row ") + std::to_string(i) + " of \"" + key + "\" has wrong length");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!rows[i][k].is_number()) {
                throw InputError(std::string("non-numeric entry in \"") + key + "\"");
            }
            m(i, k) = i == k ? 0.0 : rows[i][k].get<double>();
        }
    }
    return m;
}

inline json matrix_to_json(const Matrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.dim(); ++k) {
            row.push_back(m(i, k));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline Instance instance_from_json(const json &j) {
    InstanceData data;
    data.customers = detail::get_as<int>(j, "n");
    if (data.customers < 1) {
        throw InputError("\"n\" must be at least 1");
    }
    const auto dim = static_cast<std::size_t>(data.customers) + 1;
    data.cost = detail::matrix_from_json(j, "cost", dim);
    data.length = j.contains("length") ? detail::matrix_from_json(j, "length", dim) : data.cost;
    data.demand = detail::get_as<std::vector<int>>(j, "demand");
    data.capacity = detail::get_as<int>(j, "Q");
    data.fleet_size = detail::get_as<int>(j, "m");
    data.reward = detail::get_as<double>(j, "p");
    data.eligible = j.contains("eligible") ? detail::get_as<std::vector<int>>(j, "eligible") : std::vector<int>{};
    if (j.contains("meta")) {
        data.meta = j.at("meta");
    }
    Instance instance(std::move(data));
    if (j.contains("metricCosts") && j.at("metricCosts").is_boolean() && j.at("metricCosts").get<bool>() &&
        !instance.metric_costs()) {
        throw InputError("\"metricCosts\" is true but the cost matrix violates the triangle inequality");
    }
    return instance;
}

inline json instance_to_json(const Instance &instance) {
    json j;
    j["n"] = instance.customers();
    j["cost"] = detail::matrix_to_json(instance.cost_matrix());
    j["length"] = detail::matrix_to_json(instance.length_matrix());
    j["demand"] = instance.data().demand;
    j["Q"] = instance.capacity();
    j["m"] = instance.fleet_size();
    j["p"] = instance.reward();
    j["eligible"] = std::vector<int>(instance.eligible().begin(), instance.eligible().end());
    j["metricCosts"] = instance.metric_costs();
    j["meta"] = instance.meta();
    return j;
}

// Cost fields are optional on input; missing ones are recomputed.
inline Solution solution_from_json(const Instance &instance, const json &j) {
    Solution s;
    s.routes = detail::get_as<std::vector<Route>>(j, "routes");
    s.crowd = j.contains("crowd") ? detail::get_as<std::vector<int>>(j, "crowd") : std::vector<int>{};
    const auto computed = solution_cost(instance, s.routes, s.crowd);
    s.traveling_cost = j.contains("travelingCost") ? detail::get_as<double>(j, "travelingCost") : computed.traveling;
    s.crowd_cost = j.contains("crowdCost") ? detail::get_as<double>(j, "crowdCost") : computed.crowd;
    s.total_cost = j.contains("totalCost") ? detail::get_as<double>(j, "totalCost") : computed.total;
    return s;
}

inline json solution_to_json(const Solution &s) {
    json j;
    j["routes"] = s.routes;
    j["crowd"] = s.crowd;
    j["travelingCost"] = s.traveling_cost;
    j["crowdCost"] = s.crowd_cost;
    j["totalCost"] = s.total_cost;
    return j;
}

inline json report_to_json(const ValidationReport &report) {
    json j;
    j["feasible"] = report.feasible;
    json violations = json::array();
    for (const auto &v : report.violations) {
        violations.push_back({{"kind", to_string(v.kind)}, {"message", v.message}});
    }
    j["violations"] = std::move(violations);
    j["travelingCost"] = report.recomputed.traveling;
    j["crowdCost"] = report.recomputed.crowd;
    j["totalCost"] = report.recomputed.total;
    return j;
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << text;
}

// Stable serialization used for every JSON artifact the toolkit writes.
inline std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

} // namespace vrpcs
