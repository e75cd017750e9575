#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace vrpcs;
using vrpcs::testing::random_instance;

namespace {

Instance single_customer() {
    InstanceData d;
    d.customers = 1;
    d.cost = Matrix(2);
    d.cost(0, 1) = 3.0;
    d.cost(1, 0) = 3.0;
    d.length = d.cost;
    d.demand = {1};
    d.capacity = 1;
    d.fleet_size = 1;
    d.reward = 0.0;
    return Instance(std::move(d));
}

} // namespace

TEST(Validate, SingleCustomerOutAndBack) {
    const auto in = single_customer();
    const auto report = validate(in, make_solution(in, {{1}}, {}));
    EXPECT_TRUE(report.feasible);
    EXPECT_DOUBLE_EQ(report.recomputed.traveling, 6.0);
    EXPECT_DOUBLE_EQ(report.recomputed.total, 6.0);
}

TEST(Validate, CrowdOutsideEligibleSetLeavesCustomerUnserved) {
    const auto in = single_customer();
    Solution s;
    s.crowd = {1};
    const auto report = validate(in, s);
    EXPECT_FALSE(report.feasible);
    EXPECT_TRUE(report.has(ViolationKind::CrowdNotEligible));
}

TEST(Validate, CapacityViolation) {
    const auto in = vrpcs::testing::uniform_instance(2, 1.0, {3, 3}, 5, 1, 0.0, {});
    const auto report = validate(in, make_solution(in, {{1, 2}}, {}));
    EXPECT_FALSE(report.feasible);
    EXPECT_TRUE(report.has(ViolationKind::CapacityExceeded));
}

TEST(Validate, DetectsEachStructuralFault) {
    const auto in = vrpcs::testing::uniform_instance(3, 1.0, {1, 1, 1}, 5, 1, 1.0, {3});
    EXPECT_TRUE(validate(in, make_solution(in, {{1, 2}, {3}}, {})).has(ViolationKind::TooManyRoutes));
    EXPECT_TRUE(validate(in, make_solution(in, {{1, 2}}, {})).has(ViolationKind::Unserved));
    EXPECT_TRUE(validate(in, make_solution(in, {{1, 2, 3}}, {3})).has(ViolationKind::ServedTwice));
    EXPECT_TRUE(validate(in, make_solution(in, {{1, 2, 1, 3}}, {})).has(ViolationKind::RepeatedCustomer));
    Solution empty_route;
    empty_route.routes = {{}, {1, 2, 3}};
    EXPECT_TRUE(validate(in, empty_route).has(ViolationKind::EmptyRoute));
    auto wrong = make_solution(in, {{1, 2, 3}}, {});
    wrong.total_cost += 1e-6;
    EXPECT_TRUE(validate(in, wrong).has(ViolationKind::CostMismatch));
}

TEST(Validate, OutOfRangeNodeIsStructuralError) {
    const auto in = single_customer();
    Solution s;
    s.routes = {{2}};
    EXPECT_THROW(validate(in, s), StructuralError);
    s.routes = {{0}};
    EXPECT_THROW(validate(in, s), StructuralError);
    s.routes = {};
    s.crowd = {-1};
    EXPECT_THROW(validate(in, s), StructuralError);
}

TEST(SolutionCost, PathSum) {
    InstanceData d;
    d.customers = 2;
    d.cost = Matrix(3, 9.0);
    d.cost(0, 1) = d.cost(1, 2) = d.cost(2, 0) = 1.0;
    d.cost(0, 0) = d.cost(1, 1) = d.cost(2, 2) = 0.0;
    d.length = d.cost;
    d.demand = {1, 1};
    d.capacity = 2;
    d.fleet_size = 1;
    d.reward = 7.0;
    const Instance in(std::move(d));
    const std::vector<Route> routes{{1, 2}};
    const auto c = solution_cost(in, routes, {});
    EXPECT_DOUBLE_EQ(c.traveling, 3.0);
    EXPECT_DOUBLE_EQ(c.crowd, 0.0);
    EXPECT_DOUBLE_EQ(c.total, 3.0);
}

TEST(SolutionCost, RewardArithmetic) {
    const auto in = vrpcs::testing::two_customer_example(0.5);
    const std::vector<int> crowd{1, 2};
    const auto c = solution_cost(in, {}, crowd);
    EXPECT_DOUBLE_EQ(c.traveling, 0.0);
    EXPECT_DOUBLE_EQ(c.crowd, 1.0);
    EXPECT_DOUBLE_EQ(c.total, 1.0);
}

TEST(SolutionCost, AverageSavingArithmetic) {
    EXPECT_NEAR(100.0 * (111.18 - 82.67) / 111.18, 25.64, 0.01);
}

TEST(Instance, RejectsBadData) {
    using vrpcs::testing::uniform_instance;
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 6}, 5, 1, 0.0, {}), InputError);   // q > Q
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 0}, 5, 1, 0.0, {}), InputError);   // q = 0
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 1}, 5, 0, 0.0, {}), InputError);   // m = 0
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 1}, 5, 1, -1.0, {}), InputError);  // p < 0
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 1}, 5, 1, 0.0, {1, 1}), InputError);
    EXPECT_THROW(uniform_instance(2, 1.0, {1, 1}, 5, 1, 0.0, {3}), InputError);
    EXPECT_THROW(uniform_instance(2, -1.0, {1, 1}, 5, 1, 0.0, {}), InputError);
    EXPECT_THROW(uniform_instance(0, 1.0, {}, 5, 1, 0.0, {}), InputError);
}

TEST(Instance, MetricFlag) {
    EXPECT_TRUE(random_instance(3, 6).metric_costs());
    InstanceData d;
    d.customers = 2;
    d.cost = Matrix(3, 1.0);
    d.cost(0, 0) = d.cost(1, 1) = d.cost(2, 2) = 0.0;
    d.cost(0, 2) = 5.0; // longer than 0 -> 1 -> 2
    d.length = d.cost;
    d.demand = {1, 1};
    d.capacity = 2;
    d.fleet_size = 1;
    EXPECT_FALSE(Instance(std::move(d)).metric_costs());
}

TEST(Instance, JsonRoundTrip) {
    const auto in = random_instance(11, 7);
    const auto j = instance_to_json(in);
    const auto back = instance_from_json(j);
    EXPECT_EQ(dump_json(instance_to_json(back)), dump_json(j));
    EXPECT_EQ(j.at("metricCosts").get<bool>(), true);
}

TEST(Instance, JsonClaimedMetricIsChecked) {
    auto j = nlohmann::json::parse(R"({"n":2,"cost":[[0,1,5],[1,0,1],[1,1,0]],"demand":[1,1],"Q":2,"m":1,"p":0,
                                      "eligible":[],"metricCosts":true})");
    EXPECT_THROW(instance_from_json(j), InputError);
    j["metricCosts"] = false;
    EXPECT_FALSE(instance_from_json(j).metric_costs());
    j.erase("demand");
    EXPECT_THROW(instance_from_json(j), InputError);
}

TEST(Solution, JsonRecomputesMissingCosts) {
    const auto in = vrpcs::testing::two_customer_example(1.0);
    const auto s = solution_from_json(in, nlohmann::json::parse(R"({"routes":[[1]],"crowd":[2]})"));
    EXPECT_DOUBLE_EQ(s.traveling_cost, 4.0);
    EXPECT_DOUBLE_EQ(s.crowd_cost, 1.0);
    EXPECT_DOUBLE_EQ(s.total_cost, 5.0);
}

TEST(Validate, PureFunction) {
    const auto in = random_instance(5, 8);
    const auto s = solve_heuristic(in).solution;
    const auto a = report_to_json(validate(in, s));
    const auto b = report_to_json(validate(in, s));
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Validate, SolverOutputsPartitionCustomers) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int n = 2 + static_cast<int>(seed % 8);
        const auto in = random_instance(hash_seed(91, seed), n);
        for (const auto &s : {solve_exact(in).solution, solve_heuristic(in).solution}) {
            const auto report = validate(in, s);
            ASSERT_TRUE(report.feasible) << "seed " << seed;
            EXPECT_GE(report.recomputed.traveling, 0.0);
            EXPECT_DOUBLE_EQ(report.recomputed.crowd, in.reward() * static_cast<double>(s.crowd.size()));
            std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
            for (const auto &r : s.routes) {
                for (int i : r) {
                    ++seen[static_cast<std::size_t>(i)];
                }
            }
            for (int i : s.crowd) {
                ++seen[static_cast<std::size_t>(i)];
            }
            for (int i = 1; i <= n; ++i) {
                EXPECT_EQ(seen[static_cast<std::size_t>(i)], 1);
            }
        }
    }
}
