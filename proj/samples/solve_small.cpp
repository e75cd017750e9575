// Builds a five-customer instance by hand, solves it exactly and heuristically across the
// reward range and prints how the crowd share changes.

#include <cstdio>

#include <vrpcs/vrpcs.hpp>

int main() {
    using namespace vrpcs;
    const double xy[][2] = {{0, 0}, {1, 0}, {2, 1}, {-1, 2}, {0, -2}, {3, 3}};
    InstanceData data;
    data.customers = 5;
    data.cost = Matrix(6);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            data.cost(i, j) = i == j ? 0.0 : std::hypot(xy[i][0] - xy[j][0], xy[i][1] - xy[j][1]);
        }
    }
    data.length = data.cost;
    data.demand = {2, 3, 1, 4, 2};
    data.capacity = 7;
    data.fleet_size = 3;
    data.eligible = {1, 3, 5};

    for (double p : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        data.reward = p;
        const Instance instance(data);
        const auto exact = solve_exact(instance).solution;
        const auto heur = solve_heuristic(instance).solution;
        std::printf("p=%-4g exact %.4f (%zu routes, %zu crowd)  heuristic %.4f\n", p, exact.total_cost,
                    exact.routes.size(), exact.crowd.size(), heur.total_cost);
    }
}
