// Command-line front end: run one scenario file, or rerun the bundled
// experiment matrices, writing metrics.csv (and optional JSONL traces).
//
// Exit codes: 0 every episode reached the goal, 1 some episodes failed,
// 2 scenario validation or usage error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shepherd/shepherd.hpp"

namespace {

using namespace shepherd;

void print_metrics(const MetricsRow& row) {
    const auto& m = row.metrics;
    std::cout << row.scenario << " / " << row.algorithm << ": runs=" << m.runs
              << " success_rate=" << m.success_rate;
    if (m.successes > 0)
        std::cout << " best=" << m.best << " mean=" << m.mean << " std=" << m.stddev;
    std::cout << "\n";
}

int run_command(const std::string& scenario_path, const std::string& algorithm, int seeds,
                long long base_seed, bool trace, const std::string& out_dir) {
    ScenarioConfig scenario = load_scenario(scenario_path);
    if (!algorithm.empty()) scenario.algorithm = detail::parse_algorithm(algorithm);
    if (seeds > 0) scenario.n_runs = seeds;
    if (base_seed >= 0) scenario.base_seed = static_cast<std::uint64_t>(base_seed);

    std::vector<EpisodeResult> episodes;
    const RunMetrics metrics = run_batch(scenario, trace, &episodes);
    const MetricsRow row{scenario.name, to_string(scenario.algorithm), metrics};
    print_metrics(row);

    std::vector<std::pair<std::uint64_t, const std::vector<TraceRow>*>> traces;
    if (trace)
        for (std::size_t i = 0; i < episodes.size(); ++i)
            traces.emplace_back(scenario.base_seed + i, &episodes[i].trace);
    emit_outputs({row}, traces, out_dir);
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "metrics.csv").string() << "\n";
    return metrics.successes == metrics.runs ? 0 : 1;
}

int reproduce_command(int table, const std::string& scenarios_dir, const std::string& out_dir,
                      int seeds) {
    std::vector<MetricsRow> rows;
    bool all_ok = true;
    for (const auto& [stem, algorithms] : table_matrix(table)) {
        ScenarioConfig scenario =
            load_scenario(std::filesystem::path(scenarios_dir) / (stem + ".json"));
        if (seeds > 0) scenario.n_runs = seeds;
        for (Algorithm a : algorithms) {
            scenario.algorithm = a;
            const RunMetrics metrics = run_batch(scenario);
            rows.push_back({scenario.name, to_string(a), metrics});
            print_metrics(rows.back());
            if (metrics.successes != metrics.runs) all_ok = false;
        }
    }
    emit_outputs(rows, {}, out_dir);
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "metrics.csv").string() << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D shepherding simulator with evolutionary path planning"};
    app.require_subcommand(1);

    std::string scenario_path, algorithm, out_dir = "out";
    int seeds = -1;
    long long base_seed = -1;
    bool trace = false;

    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--algorithm", algorithm, "Override the scenario's algorithm")
        ->check(CLI::IsMember({"strombom", "unswdst", "unswdst1"}));
    run->add_option("--seeds", seeds, "Override the number of runs");
    run->add_option("--base-seed", base_seed, "Override the base seed");
    run->add_flag("--trace", trace, "Write trace_<seed>.jsonl per run");
    run->add_option("--out", out_dir, "Output directory (default: out)");

    int table = 0;
    std::string scenarios_dir = "scenarios";
    auto* rep = app.add_subcommand("reproduce", "Rerun a bundled experiment matrix");
    rep->add_option("--table", table, "Experiment matrix: 1 or 2")->required();
    rep->add_option("--scenarios", scenarios_dir, "Directory with the bundled scenario files");
    rep->add_option("--seeds", seeds, "Override the number of runs per cell");
    rep->add_option("--out", out_dir, "Output directory (default: out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_command(scenario_path, algorithm, seeds, base_seed, trace, out_dir);
        return reproduce_command(table, scenarios_dir, out_dir, seeds);
    } catch (const shepherd::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
