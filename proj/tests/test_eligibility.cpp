#include <cmath>

#include <gtest/gtest.h>

#include <vrpcs/vrpcs.hpp>

using namespace vrpcs;

namespace {

GeoScene one_station(std::vector<Site> customers) {
    GeoScene scene;
    scene.stations = {{1, 0.0, 0.0, true}};
    scene.customers = std::move(customers);
    return scene;
}

} // namespace

TEST(Eligibility, ColocatedCustomerIsEligible) {
    const auto r = compute_eligibility(one_station({{1, 0.0, 0.0}}), 0.001);
    EXPECT_EQ(r.map.walk_minutes.at(0), 0.0);
    EXPECT_EQ(r.eligible, std::vector<int>{1});
}

TEST(Eligibility, BoundaryIsInclusive) {
    const auto r = compute_eligibility(one_station({{1, 400.0, 0.0}}), 5.0);
    EXPECT_DOUBLE_EQ(r.map.walk_minutes.at(0), 5.0);
    EXPECT_EQ(r.eligible, std::vector<int>{1});
}

TEST(Eligibility, ThresholdSplitsCustomers) {
    // 2.5, 11.25 and 16.25 minutes; the second and third have their own nearest station.
    // Only the first is within 10 minutes; all three are within 16.25.
    GeoScene scene;
    scene.stations = {{1, 0.0, 0.0, true}, {2, 5000.0, 0.0, false}, {3, 0.0, 9000.0, false}};
    scene.customers = {{1, 0.0, 200.0}, {2, 5000.0, 900.0}, {3, 1300.0, 9000.0}};
    const auto r = compute_eligibility(scene, 10.0);
    EXPECT_EQ(r.eligible, (std::vector<int>{1}));
    EXPECT_EQ(compute_eligibility(scene, 11.25).eligible, (std::vector<int>{1, 2}));
    EXPECT_EQ(compute_eligibility(scene, 16.25).eligible, (std::vector<int>{1, 2, 3}));
    EXPECT_DOUBLE_EQ(r.map.walk_minutes[0], 200.0 / 80.0);
    EXPECT_DOUBLE_EQ(r.map.walk_minutes[1], 900.0 / 80.0);
    EXPECT_DOUBLE_EQ(r.map.walk_minutes[2], 1300.0 / 80.0);
}

TEST(Eligibility, Errors) {
    GeoScene scene = one_station({{1, 1.0, 1.0}});
    EXPECT_THROW(compute_eligibility(scene, 0.0), ConfigError);
    EXPECT_THROW(compute_eligibility(scene, -5.0), ConfigError);
    scene.stations.clear();
    EXPECT_THROW(compute_eligibility(scene, 5.0), ConfigError);
    scene.stations = {{1, 0.0, 0.0, false}};
    EXPECT_THROW(compute_eligibility(scene, 5.0), ConfigError);
}

TEST(Eligibility, MonotoneInDelta) {
    const auto scene = generate_scene(17);
    std::vector<int> previous;
    for (double delta : {1.0, 5.0, 10.0, 15.0, 30.0}) {
        const auto s = compute_eligibility(scene, delta).eligible;
        EXPECT_TRUE(std::includes(s.begin(), s.end(), previous.begin(), previous.end()));
        previous = s;
    }
}

TEST(Eligibility, WalkMinutesGrowWithDistance) {
    std::vector<Site> customers;
    for (int k = 0; k < 20; ++k) {
        customers.push_back({k + 1, 37.0 * k, 11.0 * k});
    }
    const auto r = compute_eligibility(one_station(customers), 10.0);
    for (std::size_t k = 1; k < r.map.walk_minutes.size(); ++k) {
        EXPECT_GE(r.map.walk_minutes[k], r.map.walk_minutes[k - 1]);
    }
}

TEST(Eligibility, InvariantUnderRigidMotion) {
    const auto scene = generate_scene(5);
    const double angle = 0.7, dx = 12345.0, dy = -678.0;
    const auto move = [&](double &x, double &y) {
        const double nx = std::cos(angle) * x - std::sin(angle) * y + dx;
        const double ny = std::sin(angle) * x + std::cos(angle) * y + dy;
        x = nx;
        y = ny;
    };
    GeoScene moved = scene;
    for (auto &c : moved.customers) {
        move(c.x, c.y);
    }
    for (auto &s : moved.stations) {
        move(s.x, s.y);
    }
    // customers exactly at a threshold could flip on rounding; none of these scenes has one
    for (double delta : {5.0, 10.0, 15.0}) {
        EXPECT_EQ(compute_eligibility(scene, delta).eligible, compute_eligibility(moved, delta).eligible);
    }
}

TEST(Ingest, Passthrough) {
    EXPECT_TRUE(ingest_eligibility(4, {}).empty());
    EXPECT_EQ(ingest_eligibility(3, {1, 2, 3}), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(ingest_eligibility(10, {2, 5, 9}), (std::vector<int>{2, 5, 9}));
}

TEST(Ingest, Errors) {
    EXPECT_THROW(ingest_eligibility(10, {2, 2}), InputError);
    EXPECT_THROW(ingest_eligibility(10, {0}), InputError);
    EXPECT_THROW(ingest_eligibility(10, {11}), InputError);
}

TEST(Scene, JsonRoundTrip) {
    const auto scene = generate_scene(3, 10);
    const auto j = scene_to_json(scene);
    EXPECT_EQ(scene_to_json(scene_from_json(j)).dump(), j.dump());
    EXPECT_EQ(j.at("walkingSpeed").get<double>(), 80.0);
}
