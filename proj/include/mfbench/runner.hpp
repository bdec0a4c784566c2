#pragma once

// Experiment orchestration: repeated seeded runs of one solver on one
// benchmark, dispatched to a small worker pool, with metric aggregation and
// report files. Run r uses seed base_seed + r and is fully determined by it,
// so results are independent of scheduling and re-runs reproduce identical
// files for noise-free benchmarks (and for noisy ones too, since the noise
// stream is seeded per run).

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mfbench/benchmarks.hpp"
#include "mfbench/history_io.hpp"
#include "mfbench/metrics.hpp"
#include "mfbench/oracle.hpp"
#include "mfbench/solvers.hpp"

namespace mfbench {

struct ExperimentConfig {
    std::string benchmark_id;
    SolverConfig solver; ///< seed field is ignored; repeats use base_seed + r
    int repeats = 20;
    std::uint64_t base_seed = 1;
    std::filesystem::path output_dir;
    NormalizationMode normalization_mode = NormalizationMode::Table;
    int workers = 0; ///< 0 = logical processor count

    /// Throws (invalid_argument / out_of_range) on any inconsistency.
    void validate() const {
        get_benchmark(benchmark_id);
        resolve_parameters(get_solver(solver.name), solver.parameters);
        if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
        if (workers < 0) throw std::invalid_argument("workers must be >= 0");
    }
};

struct RunOutcome {
    std::uint64_t seed = 0;
    RunHistory history;
    MetricsReport report;
};

struct ExperimentResult {
    std::vector<RunOutcome> runs; ///< ordered by repeat index
    AggregateReport aggregate_report;
    ConvergenceCurves curves;
};

/// Honors MFBENCH_SINGLE_THREAD (any value but "0") for deterministic
/// debugging; otherwise the requested count, defaulting to the processor
/// count.
inline int resolve_workers(int requested) {
    if (const char* env = std::getenv("MFBENCH_SINGLE_THREAD");
        env != nullptr && *env != '\0' && std::string(env) != "0")
        return 1;
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// One complete seeded run: solve, append the instrumentation record for the
/// reported incumbent, compute metrics.
inline RunOutcome execute_run(const Benchmark& benchmark, const SolverConfig& solver_base,
                              std::uint64_t seed, NormalizationMode mode) {
    SolverConfig config = solver_base;
    config.seed = seed;

    OracleRun oracle(benchmark, seed);
    const SolverResult result = run_solver(config, oracle);
    oracle.append_off_budget_record(result.incumbent);

    RunOutcome outcome;
    outcome.seed = seed;
    outcome.history = oracle.finalize();
    const Predictor* predictor = result.predictor ? &result.predictor : nullptr;
    outcome.report = metrics_from_history(benchmark, outcome.history, mode, predictor);
    return outcome;
}

/// Runs all repeats (in parallel unless forced single-threaded) and
/// aggregates. Does not touch the filesystem.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Benchmark& benchmark = get_benchmark(config.benchmark_id);

    const std::size_t repeats = static_cast<std::size_t>(config.repeats);
    std::vector<RunOutcome> outcomes(repeats);

    const int workers = std::min<int>(resolve_workers(config.workers),
                                      static_cast<int>(repeats));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= repeats) return;
            try {
                outcomes[r] = execute_run(benchmark, config.solver,
                                          config.base_seed + r,
                                          config.normalization_mode);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ExperimentResult result;
    result.runs = std::move(outcomes);

    std::vector<MetricsReport> reports;
    std::vector<RunHistory> histories;
    for (const RunOutcome& outcome : result.runs) {
        reports.push_back(outcome.report);
        histories.push_back(outcome.history);
    }
    result.aggregate_report = aggregate(reports);
    result.curves = resample_best_traces(histories);
    return result;
}

/// Runs the experiment and writes the report files into output_dir:
/// history_seed<seed>.csv and metrics_seed<seed>.json per run, plus
/// summary.json and convergence.csv. Each file is written atomically; if any
/// write fails, files already written by this call are removed.
inline ExperimentResult run_and_write(const ExperimentConfig& config) {
    config.validate();
    if (config.output_dir.empty())
        throw std::invalid_argument("output directory must be set");
    const Benchmark& benchmark = get_benchmark(config.benchmark_id);

    ExperimentResult result = run_experiment(config);

    std::filesystem::create_directories(config.output_dir);
    std::vector<std::filesystem::path> written;
    try {
        std::vector<std::uint64_t> seeds;
        std::vector<MetricsReport> reports;
        for (const RunOutcome& outcome : result.runs) {
            const std::string tag = "seed" + std::to_string(outcome.seed);
            const std::filesystem::path history_path =
                config.output_dir / ("history_" + tag + ".csv");
            write_text_atomic(history_path,
                              history_to_csv(outcome.history, benchmark.spec.dimension));
            written.push_back(history_path);

            const std::filesystem::path metrics_path =
                config.output_dir / ("metrics_" + tag + ".json");
            write_text_atomic(metrics_path,
                              metrics_to_json(outcome.report, outcome.seed).dump(2) + "\n");
            written.push_back(metrics_path);

            seeds.push_back(outcome.seed);
            reports.push_back(outcome.report);
        }

        const std::map<std::string, double> parameters =
            resolve_parameters(get_solver(config.solver.name), config.solver.parameters);
        const ordered_json summary = summary_to_json(
            config.benchmark_id, config.solver.name, parameters, config.repeats,
            config.base_seed, result.aggregate_report, seeds, reports);
        const std::filesystem::path summary_path = config.output_dir / "summary.json";
        write_text_atomic(summary_path, summary.dump(2) + "\n");
        written.push_back(summary_path);

        const std::filesystem::path curve_path = config.output_dir / "convergence.csv";
        write_text_atomic(curve_path, convergence_to_csv(result.curves));
        written.push_back(curve_path);
    } catch (...) {
        std::error_code ec;
        for (const std::filesystem::path& path : written) std::filesystem::remove(path, ec);
        throw;
    }
    return result;
}

} // namespace mfbench
