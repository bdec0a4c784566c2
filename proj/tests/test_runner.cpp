#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "mfbench/runner.hpp"

using namespace mfbench;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const fs::path& out = {}) {
    ExperimentConfig config;
    config.benchmark_id = "MF1.1";
    config.solver = {"random_search", {}, 0};
    config.repeats = 3;
    config.base_seed = 5;
    config.output_dir = out;
    return config;
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file())
            files[entry.path().filename().string()] = read_text(entry.path());
    return files;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("mfbench_runner_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("experiments run one seeded repeat per index", "[runner]") {
    const ExperimentResult result = run_experiment(small_config());
    REQUIRE(result.runs.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(result.runs[r].seed == 5 + r);
        CHECK(result.runs[r].history.seed == 5 + r);
        CHECK(result.runs[r].history.spent <= result.runs[r].history.budget);
    }

    // The aggregate is exactly the aggregate of the per-run reports.
    std::vector<MetricsReport> reports;
    for (const RunOutcome& run : result.runs) reports.push_back(run.report);
    const AggregateReport expected = aggregate(reports);
    CHECK(result.aggregate_report.e_t.median == expected.e_t.median);
    CHECK(result.aggregate_report.e_x.mean == expected.e_x.mean);
    CHECK(result.aggregate_report.e_f.max == expected.e_f.max);

    // Convergence grid: 101 points from 0 to the budget, seeds in run order.
    REQUIRE(result.curves.costs.size() == 101);
    CHECK(result.curves.costs.front() == 0.0);
    CHECK(result.curves.costs.back() == 100.0);
    CHECK(result.curves.seeds == std::vector<std::uint64_t>{5, 6, 7});
}

TEST_CASE("scheduling does not affect results", "[runner]") {
    ExperimentConfig serial = small_config();
    serial.workers = 1;
    ExperimentConfig parallel = small_config();
    parallel.workers = 4;

    const ExperimentResult a = run_experiment(serial);
    const ExperimentResult b = run_experiment(parallel);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        CHECK(history_to_csv(a.runs[r].history, 1) == history_to_csv(b.runs[r].history, 1));
        CHECK(a.runs[r].report.e_t == b.runs[r].report.e_t);
    }
    CHECK(convergence_to_csv(a.curves) == convergence_to_csv(b.curves));
}

TEST_CASE("the single-thread switch forces one worker", "[runner]") {
    REQUIRE(setenv("MFBENCH_SINGLE_THREAD", "1", 1) == 0);
    CHECK(resolve_workers(8) == 1);
    CHECK(resolve_workers(0) == 1);

    ExperimentConfig config = small_config();
    config.workers = 4;
    const ExperimentResult forced = run_experiment(config);

    REQUIRE(setenv("MFBENCH_SINGLE_THREAD", "0", 1) == 0);
    CHECK(resolve_workers(8) == 8);
    REQUIRE(unsetenv("MFBENCH_SINGLE_THREAD") == 0);
    CHECK(resolve_workers(8) == 8);
    CHECK(resolve_workers(0) >= 1);

    const ExperimentResult parallel = run_experiment(config);
    REQUIRE(forced.runs.size() == parallel.runs.size());
    for (std::size_t r = 0; r < forced.runs.size(); ++r)
        CHECK(history_to_csv(forced.runs[r].history, 1) ==
              history_to_csv(parallel.runs[r].history, 1));
}

TEST_CASE("configs are validated before any work", "[runner]") {
    ExperimentConfig config = small_config();
    config.benchmark_id = "MF9.9";
    CHECK_THROWS_AS(config.validate(), std::out_of_range);

    config = small_config();
    config.solver.name = "annealing";
    CHECK_THROWS_AS(config.validate(), std::out_of_range);

    config = small_config();
    config.solver = {"mf_screening", {{"bogus", 1.0}}, 0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.repeats = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.workers = -1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    CHECK_THROWS_AS(run_and_write(small_config()), std::invalid_argument);
}

TEST_CASE("reports land as one file set per experiment", "[runner]") {
    const TempDir dir("write");
    ExperimentConfig config = small_config(dir.path);
    config.repeats = 2;

    run_and_write(config);
    const auto files = snapshot_dir(dir.path);
    REQUIRE(files.size() == 6);
    CHECK(files.count("history_seed5.csv") == 1);
    CHECK(files.count("history_seed6.csv") == 1);
    CHECK(files.count("metrics_seed5.json") == 1);
    CHECK(files.count("metrics_seed6.json") == 1);
    CHECK(files.count("summary.json") == 1);
    CHECK(files.count("convergence.csv") == 1);

    // Files parse back with their own readers.
    const Benchmark& bench = get_benchmark("MF1.1");
    const RunHistory history =
        history_from_csv(files.at("history_seed5.csv"), bench);
    CHECK(history.records.size() == 101); // 100 charged + 1 instrumentation row
    const ordered_json summary = ordered_json::parse(files.at("summary.json"));
    CHECK(summary.at("benchmark_id") == "MF1.1");
    CHECK(summary.at("repeats") == 2);
    CHECK(summary.at("base_seed") == 5);
    CHECK(summary.at("normalization_mode") == "table");
    REQUIRE(summary.at("runs").size() == 2);
    const ordered_json metrics = ordered_json::parse(files.at("metrics_seed5.json"));
    CHECK(metrics.at("seed") == 5);
    CHECK(metrics.at("e_t") == summary.at("runs")[0].at("e_t"));

    // The convergence file covers the full grid: header plus 101 rows.
    const std::string& curve_text = files.at("convergence.csv");
    CHECK(std::count(curve_text.begin(), curve_text.end(), '\n') == 102);
    CHECK(curve_text.rfind("cost,run_5,run_6,median\n", 0) == 0);
}

TEST_CASE("re-running an experiment reproduces every byte", "[runner]") {
    const TempDir first("repro_a");
    const TempDir second("repro_b");
    ExperimentConfig config = small_config(first.path);
    config.repeats = 2;
    run_and_write(config);

    config.output_dir = second.path;
    run_and_write(config);

    const auto a = snapshot_dir(first.path);
    const auto b = snapshot_dir(second.path);
    REQUIRE(a.size() == b.size());
    for (const auto& [name, content] : a) {
        INFO("file " << name);
        REQUIRE(b.count(name) == 1);
        CHECK(b.at(name) == content);
    }

    // Overwriting in place reproduces the same bytes as well.
    run_and_write(config);
    const auto again = snapshot_dir(second.path);
    for (const auto& [name, content] : b) CHECK(again.at(name) == content);
}

TEST_CASE("noisy experiments reproduce too", "[runner]") {
    const TempDir first("noisy_a");
    const TempDir second("noisy_b");
    ExperimentConfig config;
    config.benchmark_id = "MF6";
    config.solver = {"lhs_pattern_search", {}, 0};
    config.repeats = 2;
    config.base_seed = 11;
    config.output_dir = first.path;
    run_and_write(config);
    config.output_dir = second.path;
    run_and_write(config);

    const auto a = snapshot_dir(first.path);
    const auto b = snapshot_dir(second.path);
    REQUIRE(a.size() == b.size());
    for (const auto& [name, content] : a) CHECK(b.at(name) == content);
}
