#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace vrpcs {

// Dense square matrix of doubles, row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim, double fill = 0.0) : dim_(dim), data_(dim * dim, fill) {}

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    double &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

    bool operator==(const Matrix &) const = default;

  private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// Raw fields of an instance prior to validation. Node 0 is the depot, nodes 1..n the customers.
struct InstanceData {
    int customers = 0;
    Matrix cost;             // (n+1) x (n+1), cost units; diagonal ignored
    Matrix length;           // (n+1) x (n+1), kilometers; diagonal ignored
    std::vector<int> demand; // n entries, demand[k] belongs to customer k+1
    int capacity = 0;
    int fleet_size = 1;
    double reward = 0.0;
    std::vector<int> eligible; // crowd-eligible customers S
    nlohmann::json meta = nlohmann::json::object();
};

// Relative slack accepted by the triangle-inequality check.
inline constexpr double kMetricTolerance = 1e-9;

// Immutable VRPCS instance on the complete directed graph over {0..n}.
class Instance {
  public:
    explicit Instance(InstanceData data) : data_(std::move(data)) {
        check();
        std::sort(data_.eligible.begin(), data_.eligible.end());
        eligible_mask_.assign(static_cast<std::size_t>(data_.customers) + 1, false);
        for (int i : data_.eligible) {
            eligible_mask_[static_cast<std::size_t>(i)] = true;
        }
        demand_.assign(static_cast<std::size_t>(data_.customers) + 1, 0);
        for (int i = 1; i <= data_.customers; ++i) {
            demand_[static_cast<std::size_t>(i)] = data_.demand[static_cast<std::size_t>(i - 1)];
        }
        metric_ = compute_metric();
        symmetric_ = compute_symmetric();
    }

    int customers() const { return data_.customers; }
    int nodes() const { return data_.customers + 1; }
    double cost(int i, int j) const { return data_.cost(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    double length(int i, int j) const { return data_.length(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    // Demand of node i; the depot has none.
    int demand(int i) const { return demand_[static_cast<std::size_t>(i)]; }
    int capacity() const { return data_.capacity; }
    int fleet_size() const { return data_.fleet_size; }
    double reward() const { return data_.reward; }
    std::span<const int> eligible() const { return data_.eligible; }
    bool is_eligible(int i) const { return i >= 1 && i <= data_.customers && eligible_mask_[static_cast<std::size_t>(i)]; }
    bool metric_costs() const { return metric_; }
    bool symmetric_costs() const { return symmetric_; }
    const nlohmann::json &meta() const { return data_.meta; }
    const Matrix &cost_matrix() const { return data_.cost; }
    const Matrix &length_matrix() const { return data_.length; }
    const InstanceData &data() const { return data_; }

    bool valid_customer(int i) const { return i >= 1 && i <= data_.customers; }

    int total_demand() const {
        int sum = 0;
        for (int i = 1; i <= data_.customers; ++i) {
            sum += demand(i);
        }
        return sum;
    }

    // Out-and-back cost of a dedicated single-customer route.
    double out_and_back(int i) const { return cost(0, i) + cost(i, 0); }

    Instance with_reward(double reward) const {
        InstanceData copy = data_;
        copy.reward = reward;
        return Instance(std::move(copy));
    }

    Instance with_eligible(std::vector<int> eligible) const {
        InstanceData copy = data_;
        copy.eligible = std::move(eligible);
        return Instance(std::move(copy));
    }

    Instance with_fleet_size(int fleet_size) const {
        InstanceData copy = data_;
        copy.fleet_size = fleet_size;
        return Instance(std::move(copy));
    }

  private:
    void check() const {
        const int n = data_.customers;
        if (n < 1) {
            throw InputError("instance needs at least one customer, got n=" + std::to_string(n));
        }
        const auto dim = static_cast<std::size_t>(n) + 1;
        if (data_.cost.dim() != dim || data_.length.dim() != dim) {
            throw InputError("cost and length matrices must be " + std::to_string(dim) + "x" + std::to_string(dim));
        }
        if (data_.demand.size() != static_cast<std::size_t>(n)) {
            throw InputError("demand vector must have n=" + std::to_string(n) + " entries");
        }
        if (data_.capacity < 1) {
            throw InputError("capacity must be positive");
        }
        if (data_.fleet_size < 1) {
            throw InputError("fleet size must be at least 1");
        }
        if (!(data_.reward >= 0.0) || !std::isfinite(data_.reward)) {
            throw InputError("reward must be a finite value >= 0");
        }
        for (std::size_t k = 0; k < data_.demand.size(); ++k) {
            const int q = data_.demand[k];
            if (q <= 0) {
                throw InputError("demand of customer " + std::to_string(k + 1) + " must be positive");
            }
            if (q > data_.capacity) {
                throw InputError("demand of customer " + std::to_string(k + 1) + " exceeds capacity");
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                if (i == j) {
                    continue;
                }
                const double c = data_.cost(i, j);
                const double d = data_.length(i, j);
                if (!std::isfinite(c) || c < 0.0 || !std::isfinite(d) || d < 0.0) {
                    throw InputError("arc (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") has a negative or non-finite cost/length");
                }
            }
        }
        std::vector<bool> seen(dim, false);
        for (int i : data_.eligible) {
            if (i < 1 || i > n) {
                throw InputError("eligible customer " + std::to_string(i) + " is out of range 1.." + std::to_string(n));
            }
            if (seen[static_cast<std::size_t>(i)]) {
                throw InputError("eligible customer " + std::to_string(i) + " listed twice");
            }
            seen[static_cast<std::size_t>(i)] = true;
        }
    }

    bool compute_metric() const {
        const int dim = nodes();
        for (int i = 0; i < dim; ++i) {
            for (int k = 0; k < dim; ++k) {
                if (i == k) {
                    continue;
                }
                const double direct = cost(i, k);
                const double slack = kMetricTolerance * std::max(1.0, direct);
                for (int j = 0; j < dim; ++j) {
                    if (j == i || j == k) {
                        continue;
                    }
                    if (direct > cost(i, j) + cost(j, k) + slack) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    bool compute_symmetric() const {
        for (int i = 0; i < nodes(); ++i) {
            for (int j = i + 1; j < nodes(); ++j) {
                if (cost(i, j) != cost(j, i)) {
                    return false;
                }
            }
        }
        return true;
    }

    InstanceData data_;
    std::vector<bool> eligible_mask_;
    std::vector<int> demand_;
    bool metric_ = false;
    bool symmetric_ = false;
};

} // namespace vrpcs
