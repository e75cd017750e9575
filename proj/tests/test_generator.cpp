#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include <vrpcs/vrpcs.hpp>

using namespace vrpcs;

TEST(Scene, SeventeenStationsOneMain) {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const auto scene = generate_scene(seed);
        EXPECT_EQ(scene.stations.size(), 17u);
        EXPECT_EQ(std::count_if(scene.stations.begin(), scene.stations.end(), [](const Station &s) { return s.main; }), 1);
        EXPECT_EQ(scene.customers.size(), 100u);
        EXPECT_NO_THROW(check_scene(scene));
    }
}

TEST(Scene, MainStationInMiddleThird) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto scene = generate_scene(seed, 0);
        // arc length along the L: the first station is the north end, the corner is the origin
        const auto &first = scene.stations.front();
        const auto &main = scene.main_station();
        const double north = first.y, east = scene.stations.back().x;
        const double s = main.x == 0.0 ? north - main.y : north + main.x;
        EXPECT_GE(s, (north + east) / 3.0);
        EXPECT_LE(s, 2.0 * (north + east) / 3.0);
    }
}

TEST(Scene, Deterministic) {
    EXPECT_EQ(scene_to_json(generate_scene(7)).dump(), scene_to_json(generate_scene(7)).dump());
    EXPECT_NE(scene_to_json(generate_scene(7)).dump(), scene_to_json(generate_scene(8)).dump());
}

TEST(SceneToInstance, MetricSymmetricCosts) {
    const auto scene = generate_scene(3);
    const auto in = scene_to_instance(scene, generate_demands(1, 100), 90, 10, 1.0, 10.0);
    EXPECT_TRUE(in.metric_costs());
    const int nodes = in.nodes();
    for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < nodes; ++j) {
            ASSERT_EQ(in.cost(i, j), in.cost(j, i));
            ASSERT_EQ(in.cost(i, j), in.length(i, j));
            for (int k = 0; k < nodes; ++k) {
                ASSERT_LE(in.cost(i, k), in.cost(i, j) + in.cost(j, k) + 1e-9);
            }
        }
    }
}

TEST(SceneToInstance, DepotSitsOnMainStation) {
    const auto scene = generate_scene(4);
    const auto in = scene_to_instance(scene, generate_demands(1, 100), 90, 10, 1.0, 10.0);
    const auto &main = scene.main_station();
    const auto &c = scene.customers[0];
    EXPECT_NEAR(in.cost(0, 1), std::hypot(c.x - main.x, c.y - main.y) / 1000.0 * 1.3, 1e-12);
    // a customer placed exactly on the main station is at zero distance from the depot
    GeoScene probe = scene;
    probe.customers = {{1, main.x, main.y}};
    const auto one = scene_to_instance(probe, {1}, 90, 10, 1.0, 5.0);
    EXPECT_EQ(one.cost(0, 1), 0.0);
    EXPECT_EQ(one.eligible().size(), 1u);
}

TEST(SceneToInstance, EligibleGrowsWithDelta) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto scene = generate_scene(seed);
        const auto q = generate_demands(seed, 100);
        std::size_t last = 0;
        for (double delta : {5.0, 10.0, 15.0}) {
            const auto n = scene_to_instance(scene, q, 90, 10, 1.0, delta).eligible().size();
            EXPECT_GE(n, last);
            last = n;
        }
    }
}

TEST(SceneToInstance, DemandSizeMismatch) {
    EXPECT_THROW(scene_to_instance(generate_scene(1), {1, 2}, 90, 10, 1.0, 5.0), InputError);
}

TEST(Grid, ThreeHundredSixtyCells) {
    const Grid grid(GridSpec{});
    EXPECT_EQ(grid.size(), 360u);
    std::set<std::tuple<int, int, double, double>> seen;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = grid.cell(k);
        EXPECT_EQ(c.id, static_cast<int>(k));
        seen.insert({c.scenario, c.capacity, c.reward, c.delta});
    }
    EXPECT_EQ(seen.size(), 360u);
    EXPECT_THROW(grid.cell(360), InputError);
}

TEST(Grid, ScenarioCellsShareGeometryAndDemand) {
    GridSpec spec;
    spec.customer_count = 30;
    const Grid grid(spec);
    // cells 0 and 3 share scenario 0, Q=360 and delta=5; they differ in p
    const auto a = grid.instance(std::size_t{0});
    const auto b = grid.instance(std::size_t{3});
    ASSERT_EQ(grid.cell(0).scenario, grid.cell(3).scenario);
    ASSERT_NE(grid.cell(0).reward, grid.cell(3).reward);
    EXPECT_EQ(instance_to_json(a).at("cost").dump(), instance_to_json(b).at("cost").dump());
    EXPECT_EQ(instance_to_json(a).at("demand").dump(), instance_to_json(b).at("demand").dump());
    // another scenario changes the demands only
    const auto other = grid.instance(std::size_t{72});
    ASSERT_EQ(grid.cell(72).scenario, 1);
    EXPECT_NE(instance_to_json(a).at("demand").dump(), instance_to_json(other).at("demand").dump());
}

TEST(Grid, ByteIdenticalRegeneration) {
    GridSpec spec;
    spec.customer_count = 20;
    EXPECT_EQ(manifest_csv(Grid(spec)), manifest_csv(Grid(spec)));
    EXPECT_EQ(dump_json(instance_to_json(Grid(spec).instance(std::size_t{100}))),
              dump_json(instance_to_json(Grid(spec).instance(std::size_t{100}))));
}

TEST(Demands, UniformLaw) {
    std::array<int, 6> counts{};
    int total = 0;
    for (int scenario = 0; scenario < 200; ++scenario) {
        for (int q : generate_demands(hash_seed(2021, static_cast<std::uint64_t>(scenario)), 100)) {
            ASSERT_GE(q, 1);
            ASSERT_LE(q, 5);
            ++counts[static_cast<std::size_t>(q)];
            ++total;
        }
    }
    double chi2 = 0.0;
    for (int v = 1; v <= 5; ++v) {
        const double share = static_cast<double>(counts[static_cast<std::size_t>(v)]) / total;
        EXPECT_NEAR(share, 0.2, 0.02);
        const double expected = total / 5.0;
        chi2 += (counts[static_cast<std::size_t>(v)] - expected) * (counts[static_cast<std::size_t>(v)] - expected) / expected;
    }
    EXPECT_LT(chi2, 18.47); // 4 degrees of freedom, p = 0.001
}

TEST(Grid, LargestCapacityNeedsOneVehicle) {
    const Grid grid(GridSpec{});
    for (int scenario = 0; scenario < 5; ++scenario) {
        const auto q = grid.demands(scenario);
        const int total = std::accumulate(q.begin(), q.end(), 0);
        EXPECT_LE(total, 360);
        EXPECT_GT(total, 180); // Q=180 needs two
    }
}

TEST(Rng, PinnedSequence) {
    // SplitMix64 output for seed 0 (first values of the reference generator)
    CounterRng rng(0);
    EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(Rng, UniformIntBounds) {
    CounterRng rng(5);
    for (int k = 0; k < 10000; ++k) {
        const auto v = rng.uniform_int(-3, 3);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 3);
    }
}

TEST(GridSpecJson, Validation) {
    EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse(R"({"capacities":[]})")), ConfigError);
    EXPECT_THROW(grid_spec_from_json(nlohmann::json::parse(R"({"capacities":[4]})")), ConfigError);
    const auto spec = grid_spec_from_json(nlohmann::json::parse(R"({"demandScenarios":2,"masterSeed":7})"));
    EXPECT_EQ(spec.demand_scenarios, 2);
    EXPECT_EQ(spec.master_seed, 7u);
    EXPECT_EQ(spec.cell_count(), 144u);
}
