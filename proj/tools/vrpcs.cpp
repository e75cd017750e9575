// Command-line front end: instance generation, solving, grid runs, aggregation, MILP export
// and validation. Exit codes: 0 ok, 2 infeasible, 3 bad input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <vrpcs/vrpcs.hpp>

namespace fs = std::filesystem;
using namespace vrpcs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitBadInput = 3;

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

fs::path instance_path(const fs::path &root, int cell) { return root / "instances" / (cell_file_stem(cell) + ".json"); }
fs::path scene_path(const fs::path &root, int cell) { return root / "scenes" / (cell_file_stem(cell) + ".json"); }
fs::path solution_path(const fs::path &dir, int cell) { return dir / (cell_file_stem(cell) + ".solution.json"); }

int cmd_generate(const std::string &spec_path, const std::string &out_dir) {
    const GridSpec spec = grid_spec_from_json(read_json_file(spec_path));
    const Grid grid(spec);
    const fs::path root(out_dir);
    fs::create_directories(root / "instances");
    fs::create_directories(root / "scenes");
    const std::string scene_text = dump_json(scene_to_json(grid.scene()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto cell = grid.cell(k);
        write_text_file(instance_path(root, cell.id).string(), dump_json(instance_to_json(grid.instance(cell))));
        write_text_file(scene_path(root, cell.id).string(), scene_text);
    }
    write_text_file((root / "manifest.csv").string(), manifest_csv(grid));
    write_text_file((root / "grid_spec.json").string(), dump_json(grid_spec_to_json(spec)));
    std::cerr << "wrote " << grid.size() << " cells to " << root.string() << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string instance, solver = "heuristic", out, certificate, trace;
    double budget = 600.0;
    std::uint64_t seed = 0;
    int restarts = 10;
    int threads = 1;
};

int cmd_solve(const SolveArgs &args) {
    const Instance instance = instance_from_json(read_json_file(args.instance));
    Solution solution;
    if (parse_solver(args.solver) == SolverChoice::Exact) {
        ExactConfig config;
        config.threads = args.threads;
        const auto result = solve_exact(instance, config);
        solution = result.solution;
        if (!args.certificate.empty()) {
            const json cert = {{"subsetsExplored", result.certificate.subsets_explored},
                               {"dpStates", result.certificate.dp_states},
                               {"elapsedMs", result.certificate.elapsed_ms}};
            write_text_file(args.certificate, dump_json(cert));
        }
    } else {
        HeuristicConfig config;
        config.seed = args.seed;
        config.restarts = args.restarts;
        config.budget_seconds = args.budget;
        config.threads = args.threads;
        std::ofstream trace_out;
        if (!args.trace.empty()) {
            trace_out.open(args.trace);
            config.trace = [&trace_out](const std::string &line) { trace_out << line << "\n"; };
        }
        const auto result = solve_heuristic(instance, config);
        solution = result.solution;
        std::cerr << "heuristic: construction " << result.report.construction_cost << ", best " << result.report.best_cost
                  << ", restarts " << result.report.restarts_completed << ", " << result.report.elapsed_ms << " ms\n";
    }
    const auto report = validate(instance, solution);
    if (!report.feasible) {
        std::cerr << "solver output failed validation: " << report.violations.front().message << "\n";
        return kExitInfeasible;
    }
    emit(args.out, dump_json(solution_to_json(solution)));
    return kExitOk;
}

struct GridArgs {
    std::string manifest, solver = "heuristic", out, timing, solutions;
    int jobs = 1;
    double budget = 600.0;
    std::uint64_t seed = 0;
    int restarts = 10;
};

int cmd_grid(const GridArgs &args) {
    const auto cells = parse_manifest(read_text(args.manifest));
    const fs::path root = fs::path(args.manifest).parent_path();
    RunOptions options;
    options.solver = parse_solver(args.solver);
    options.jobs = args.jobs;
    options.budget_seconds = args.budget;
    options.seed = args.seed;
    options.restarts = args.restarts;
    options.keep_solutions = !args.solutions.empty();
    const auto results = run_grid(
        cells, [&root](const GridCell &c) { return instance_from_json(read_json_file(instance_path(root, c.id).string())); },
        options);
    emit(args.out, results_csv(results));
    if (!args.timing.empty()) {
        write_text_file(args.timing, timing_csv(results));
    }
    if (!args.solutions.empty()) {
        fs::create_directories(args.solutions);
        for (const auto &r : results) {
            if (r.solution) {
                write_text_file(solution_path(args.solutions, r.cell.id).string(), dump_json(solution_to_json(*r.solution)));
            }
        }
    }
    const auto failed = std::count_if(results.begin(), results.end(), [](const CellResult &r) { return !r.feasible; });
    std::cerr << results.size() << " cells solved, " << failed << " failed\n";
    return kExitOk;
}

int cmd_aggregate(const std::string &results_path, double baseline, bool by_q, const std::string &out) {
    const auto results = parse_results(read_text(results_path));
    emit(out, aggregate_csv(aggregate(results, baseline, by_q)));
    return kExitOk;
}

int cmd_export_milp(const std::string &instance_file, const std::string &out) {
    const Instance instance = instance_from_json(read_json_file(instance_file));
    const MilpModel model = build_model(instance);
    write_text_file(out, export_text(model));
    fs::path meta(out);
    meta.replace_extension(".meta.json");
    write_text_file(meta.string(), dump_json(model_meta(model)));
    return kExitOk;
}

int cmd_validate(const std::string &instance_file, const std::string &solution_file) {
    const Instance instance = instance_from_json(read_json_file(instance_file));
    const Solution solution = solution_from_json(instance, read_json_file(solution_file));
    const auto report = validate(instance, solution);
    std::cout << dump_json(report_to_json(report));
    return report.feasible ? kExitOk : kExitInfeasible;
}

int cmd_eligibility(const std::string &scene_file, double delta) {
    const GeoScene scene = scene_from_json(read_json_file(scene_file));
    const auto result = compute_eligibility(scene, delta);
    std::cout << dump_json({{"walkMinutes", result.map.walk_minutes}, {"eligible", result.eligible}});
    return kExitOk;
}

int cmd_export_plots(const std::string &manifest, const std::string &results_path, const std::string &solutions_dir,
                     const std::vector<int> &cells, double baseline, const std::string &out_dir) {
    auto results = parse_results(read_text(results_path));
    const fs::path root = fs::path(manifest).parent_path();
    std::map<int, Instance> selected;
    GeoScene scene;
    for (int id : cells) {
        selected.emplace(id, instance_from_json(read_json_file(instance_path(root, id).string())));
        scene = scene_from_json(read_json_file(scene_path(root, id).string()));
    }
    for (auto &r : results) {
        const auto it = selected.find(r.cell.id);
        if (it != selected.end()) {
            r.solution = solution_from_json(it->second, read_json_file(solution_path(solutions_dir, r.cell.id).string()));
        }
    }
    const auto bundle = export_plots(results, aggregate(results, baseline), scene, selected);
    fs::create_directories(out_dir);
    for (const auto &[name, content] : bundle.files) {
        write_text_file((fs::path(out_dir) / name).string(), content);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"VRP with crowd-shippers: generator, solvers, MILP export and experiment harness"};
    app.require_subcommand(1);

    std::string spec_path, out_dir;
    auto *generate = app.add_subcommand("generate", "generate the instance grid");
    generate->add_option("--spec", spec_path, "grid spec JSON")->required();
    generate->add_option("--out", out_dir, "output directory")->required();

    SolveArgs solve_args;
    auto *solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("--instance", solve_args.instance, "instance JSON")->required();
    solve->add_option("--solver", solve_args.solver, "exact|heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
    solve->add_option("--budget-s", solve_args.budget, "heuristic wall-clock budget in seconds");
    solve->add_option("--seed", solve_args.seed, "heuristic seed");
    solve->add_option("--restarts", solve_args.restarts, "heuristic restarts");
    solve->add_option("--threads", solve_args.threads, "worker threads");
    solve->add_option("--out", solve_args.out, "solution JSON (default stdout)");
    solve->add_option("--certificate", solve_args.certificate, "exact solver certificate JSON");
    solve->add_option("--trace", solve_args.trace, "heuristic move trace (JSON lines)");

    GridArgs grid_args;
    auto *grid = app.add_subcommand("grid", "solve every cell of a manifest");
    grid->add_option("--manifest", grid_args.manifest, "manifest CSV written by generate")->required();
    grid->add_option("--solver", grid_args.solver, "exact|heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
    grid->add_option("--jobs", grid_args.jobs, "parallel workers");
    grid->add_option("--budget-s", grid_args.budget, "per-cell budget in seconds");
    grid->add_option("--seed", grid_args.seed, "heuristic seed");
    grid->add_option("--restarts", grid_args.restarts, "heuristic restarts");
    grid->add_option("--out", grid_args.out, "results CSV (default stdout)");
    grid->add_option("--timing", grid_args.timing, "per-cell elapsed time CSV");
    grid->add_option("--solutions-dir", grid_args.solutions, "write each cell's solution JSON here");

    std::string results_path, aggregate_out;
    double baseline = 5.0;
    bool by_q = false;
    auto *agg = app.add_subcommand("aggregate", "average savings per reward");
    agg->add_option("--results", results_path, "results CSV")->required();
    agg->add_option("--baseline-p", baseline, "reward of the baseline cells");
    agg->add_flag("--by-q", by_q, "facet by vehicle capacity");
    agg->add_option("--out", aggregate_out, "output CSV (default stdout)");

    std::string milp_instance, milp_out;
    auto *milp = app.add_subcommand("export-milp", "write the MILP as free-format MPS");
    milp->add_option("--instance", milp_instance, "instance JSON")->required();
    milp->add_option("--out", milp_out, "model file (.mps); sidecar .meta.json next to it")->required();

    std::string val_instance, val_solution;
    auto *val = app.add_subcommand("validate", "check a solution against an instance");
    val->add_option("--instance", val_instance, "instance JSON")->required();
    val->add_option("--solution", val_solution, "solution JSON")->required();

    std::string scene_file;
    double delta = 10.0;
    auto *elig = app.add_subcommand("eligibility", "walking-time eligibility of a scene");
    elig->add_option("--scene", scene_file, "scene JSON")->required();
    elig->add_option("--delta", delta, "walking threshold in minutes");

    std::string plot_manifest, plot_results, plot_solutions, plot_out;
    std::vector<int> plot_cells;
    double plot_baseline = 5.0;
    auto *plots = app.add_subcommand("export-plots", "CSV tables and route GeoJSON for charts");
    plots->add_option("--manifest", plot_manifest, "manifest CSV")->required();
    plots->add_option("--results", plot_results, "results CSV")->required();
    plots->add_option("--solutions-dir", plot_solutions, "solutions written by grid --solutions-dir");
    plots->add_option("--cells", plot_cells, "cell ids to map as GeoJSON")->delimiter(',');
    plots->add_option("--baseline-p", plot_baseline, "reward of the baseline cells");
    plots->add_option("--out", plot_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*generate) {
            return cmd_generate(spec_path, out_dir);
        }
        if (*solve) {
            return cmd_solve(solve_args);
        }
        if (*grid) {
            return cmd_grid(grid_args);
        }
        if (*agg) {
            return cmd_aggregate(results_path, baseline, by_q, aggregate_out);
        }
        if (*milp) {
            return cmd_export_milp(milp_instance, milp_out);
        }
        if (*val) {
            return cmd_validate(val_instance, val_solution);
        }
        if (*elig) {
            return cmd_eligibility(scene_file, delta);
        }
        if (*plots) {
            return cmd_export_plots(plot_manifest, plot_results, plot_solutions, plot_cells, plot_baseline, plot_out);
        }
    } catch (const InfeasibleError &e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
