#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace vrpcs;
using vrpcs::testing::random_instance;
using vrpcs::testing::two_customer_example;

TEST(SolveExact, TwoCustomersCheapReward) {
    const auto r = solve_exact(two_customer_example(1.0));
    EXPECT_DOUBLE_EQ(r.solution.total_cost, 2.0);
    EXPECT_EQ(r.solution.crowd, (std::vector<int>{1, 2}));
    EXPECT_TRUE(r.solution.routes.empty());
}

TEST(SolveExact, TwoCustomersTiePrefersCrowd) {
    // vehicle-both also costs 6
    const auto r = solve_exact(two_customer_example(3.0));
    EXPECT_DOUBLE_EQ(r.solution.total_cost, 6.0);
    EXPECT_EQ(r.solution.crowd, (std::vector<int>{1, 2}));
}

TEST(SolveExact, TwoCustomersExpensiveReward) {
    const auto r = solve_exact(two_customer_example(5.0));
    EXPECT_DOUBLE_EQ(r.solution.total_cost, 6.0);
    EXPECT_TRUE(r.solution.crowd.empty());
    EXPECT_EQ(r.solution.routes, (std::vector<Route>{{1, 2}}));
}

TEST(SolveExact, TieOnCountPicksLexicographicallySmallerSet) {
    // one of the two must be crowd-served (m=1, Q=1); both choices cost 4 + 1
    const auto in = vrpcs::testing::uniform_instance(2, 2.0, {1, 1}, 1, 1, 1.0, {1, 2});
    const auto in2 = in.with_reward(5.0);
    EXPECT_EQ(solve_exact(in2).solution.crowd, std::vector<int>{1});
}

TEST(SolveExact, SingleCustomerOutAndBack) {
    InstanceData d;
    d.customers = 1;
    d.cost = Matrix(2);
    d.cost(0, 1) = 2.5;
    d.cost(1, 0) = 4.0;
    d.length = d.cost;
    d.demand = {3};
    d.capacity = 3;
    d.fleet_size = 1;
    const Instance in(std::move(d));
    EXPECT_DOUBLE_EQ(solve_exact(in).solution.total_cost, 6.5);
    EXPECT_DOUBLE_EQ(brute_force(in), 6.5);
}

TEST(SolveExact, CapacityForcesTwoRoutes) {
    const auto in = vrpcs::testing::uniform_instance(2, 2.0, {3, 3}, 5, 2, 0.0, {});
    EXPECT_DOUBLE_EQ(solve_exact(in).solution.total_cost, 8.0);
    EXPECT_DOUBLE_EQ(brute_force(in), 8.0);
    EXPECT_THROW(solve_exact(in.with_fleet_size(1)), InfeasibleError);
}

TEST(SolveExact, EmptyEligibleSetIsPlainRouting) {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto in = random_instance(hash_seed(5, k), 2 + static_cast<int>(k % 6)).with_eligible({});
        const auto r = solve_exact(in);
        EXPECT_TRUE(r.solution.crowd.empty());
        EXPECT_NEAR(r.solution.total_cost, brute_force(in), 1e-9);
    }
}

TEST(SolveExact, MatchesBruteForce) {
    for (std::uint64_t k = 0; k < 200; ++k) {
        vrpcs::testing::RandomOptions opt;
        opt.metric = k % 4 != 3;
        const auto in = random_instance(hash_seed(1234, k), 2 + static_cast<int>(k % 6), opt);
        const auto r = solve_exact(in);
        ASSERT_TRUE(validate(in, r.solution).feasible);
        EXPECT_NEAR(r.solution.total_cost, brute_force(in), 1e-9 * std::max(1.0, r.solution.total_cost)) << "k=" << k;
    }
}

TEST(SolveExact, MonotoneInReward) {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto base = random_instance(hash_seed(77, k), 4 + static_cast<int>(k % 5));
        double last_cost = -1.0;
        std::size_t last_crowd = base.eligible().size() + 1;
        for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 5.0}) {
            const auto s = solve_exact(base.with_reward(p)).solution;
            EXPECT_GE(s.total_cost, last_cost - 1e-9);
            EXPECT_LE(s.crowd.size(), last_crowd);
            last_cost = s.total_cost;
            last_crowd = s.crowd.size();
        }
    }
}

TEST(SolveExact, BoundaryRewards) {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto in = random_instance(hash_seed(99, k), 3 + static_cast<int>(k % 6));
        std::vector<int> keep;
        for (int i = 1; i <= in.customers(); ++i) {
            if (!in.is_eligible(i)) {
                keep.push_back(i);
            }
        }
        // p = 0: routing over the non-eligible customers only
        const auto free = solve_exact(in.with_reward(0.0)).solution;
        EXPECT_EQ(free.crowd, std::vector<int>(in.eligible().begin(), in.eligible().end()));
        const double reduced = keep.empty() ? 0.0 : solve_exact(vrpcs::testing::restrict_to(in, keep)).solution.total_cost;
        EXPECT_NEAR(free.total_cost, reduced, 1e-9 * std::max(1.0, reduced));

        double bar = 0.0;
        for (int i : in.eligible()) {
            bar = std::max(bar, in.out_and_back(i));
        }
        const auto full = solve_exact(in.with_reward(bar)).solution;
        const auto cvrp = solve_exact(in.with_eligible({})).solution;
        EXPECT_NEAR(full.total_cost, cvrp.total_cost, 1e-9 * std::max(1.0, cvrp.total_cost));
    }
}

TEST(SolveExact, IndependentOfThreadCount) {
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto in = random_instance(hash_seed(8, k), 9);
        ExactConfig one, four;
        four.threads = 4;
        const auto a = solve_exact(in, one).solution;
        const auto b = solve_exact(in, four).solution;
        EXPECT_EQ(solution_to_json(a).dump(), solution_to_json(b).dump());
    }
}

TEST(SolveExact, Certificate) {
    const auto r = solve_exact(random_instance(2, 6));
    EXPECT_GT(r.certificate.subsets_explored, 0u);
    EXPECT_GT(r.certificate.dp_states, 0u);
    EXPECT_GE(r.certificate.elapsed_ms, 0);
}

TEST(SolveExact, SizeGuards) {
    vrpcs::testing::RandomOptions opt;
    opt.max_capacity = 40;
    const auto big = random_instance(1, 13, opt);
    EXPECT_THROW(solve_exact(big), SizeLimitError);
    ExactConfig small;
    small.max_eligible = 0;
    EXPECT_THROW(solve_exact(random_instance(1, 5).with_eligible({1}), small), SizeLimitError);
    ExactConfig bad;
    bad.threads = 0;
    EXPECT_THROW(solve_exact(random_instance(1, 5), bad), ConfigError);
    EXPECT_THROW(brute_force(random_instance(1, 8)), SizeLimitError);
}
