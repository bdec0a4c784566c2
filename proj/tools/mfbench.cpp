// Command-line front end for the multifidelity benchmark harness.
//
// Subcommands:
//   list      - table of all benchmark instances
//   evaluate  - one uncharged evaluation for inspection
//   run       - repeated seeded solver runs with CSV/JSON reports
//   metrics   - recompute metrics from a stored history CSV
//
// Exit codes: 0 success, 2 usage error, 3 config error, 4 runtime failure.

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfbench/mfbench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

std::string short_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.8g", value);
    return buffer;
}

std::string join_doubles(const std::vector<double>& values, const char* sep = ", ") {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += sep;
        out += short_double(v);
    }
    return out;
}

std::string describe_optimum(const mfbench::OptimumSet& optimum) {
    switch (optimum.kind) {
        case mfbench::OptimumKind::Point:
            return "(" + join_doubles(optimum.point) + ")";
        case mfbench::OptimumKind::FirstCoordinateZero:
            return "x_1 = 0 (manifold)";
        case mfbench::OptimumKind::CoordinateProductLevel:
            return "x_1*x_2 in {" + join_doubles(optimum.product_levels) + "} (manifold)";
    }
    return "?";
}

mfbench::DesignPoint parse_point(const std::string& text) {
    mfbench::DesignPoint point;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string field = text.substr(start, comma - start);
        errno = 0;
        char* end = nullptr;
        const double value = std::strtod(field.c_str(), &end);
        if (field.empty() || end == field.c_str() || *end != '\0' || errno == ERANGE)
            throw std::invalid_argument("bad coordinate '" + field + "' in point '" + text + "'");
        point.push_back(value);
        start = comma + 1;
        if (comma == text.size()) break;
    }
    if (point.empty()) throw std::invalid_argument("empty point");
    return point;
}

std::map<std::string, double> parse_param_overrides(const std::vector<std::string>& items) {
    std::map<std::string, double> params;
    for (const std::string& item : items) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad --param '" + item + "'; expected key=value");
        const std::string key = item.substr(0, eq);
        const std::string value_text = item.substr(eq + 1);
        errno = 0;
        char* end = nullptr;
        const double value = std::strtod(value_text.c_str(), &end);
        if (value_text.empty() || end == value_text.c_str() || *end != '\0' || errno == ERANGE)
            throw std::invalid_argument("bad --param value in '" + item + "'");
        params[key] = value;
    }
    return params;
}

// --- list -------------------------------------------------------------------

int cmd_list() {
    std::printf("%-6s %-26s %2s %6s %8s %-22s %-42s %10s %10s %10s\n", "ID", "family", "D",
                "levels", "budget", "costs", "x*", "f*", "f_min", "f_max");
    for (const std::string& id : mfbench::benchmark_ids()) {
        const mfbench::BenchmarkSpec& spec = mfbench::get_benchmark(id).spec;
        std::printf("%-6s %-26s %2d %6d %8s %-22s %-42s %10s %10s %10s\n", spec.id.c_str(),
                    spec.family.c_str(), spec.dimension, spec.levels(),
                    short_double(spec.budget).c_str(),
                    join_doubles(spec.fidelity_costs).c_str(),
                    describe_optimum(spec.reference.optimum).c_str(),
                    short_double(spec.reference.f_star).c_str(),
                    short_double(spec.reference.f_min).c_str(),
                    short_double(spec.reference.f_max).c_str());
    }
    return kExitOk;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
    std::string benchmark_id;
    int level = 1;
    std::string point_text;
    std::optional<std::uint64_t> seed;
};

int cmd_evaluate(const EvaluateArgs& args) {
    try {
        const mfbench::Benchmark& benchmark = mfbench::get_benchmark(args.benchmark_id);
        const mfbench::DesignPoint x = parse_point(args.point_text);

        std::optional<mfbench::NoiseStream> stream;
        if (benchmark.is_noisy()) {
            if (!args.seed) {
                std::cerr << "error: benchmark '" << args.benchmark_id
                          << "' is noisy; --seed is required\n";
                return kExitUsage;
            }
            stream.emplace(mfbench::derive_seed(*args.seed, 0));
        }

        const double value = benchmark.eval(args.level, x, stream ? &*stream : nullptr);
        const double cost = benchmark.spec.cost_of_level(args.level);
        std::printf("%s level %d at (%s): value = %s, cost = %s\n", args.benchmark_id.c_str(),
                    args.level, join_doubles(x).c_str(), mfbench::format_double(value).c_str(),
                    short_double(cost).c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// --- run ----------------------------------------------------------------------

struct RunArgs {
    std::string config_path;
    std::string benchmark_id;
    std::string solver_name;
    std::vector<std::string> param_items;
    int repeats = -1;
    std::int64_t base_seed = -1;
    std::string output_dir;
    std::string normalization;
    int workers = -1;
};

mfbench::ExperimentConfig config_from_json_file(const std::string& path) {
    mfbench::ordered_json j;
    try {
        j = mfbench::ordered_json::parse(mfbench::read_text(path));
    } catch (const std::exception& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }

    static const std::vector<std::string> known = {
        "benchmark_id", "solver", "repeats", "base_seed",
        "output_dir",   "normalization_mode", "workers"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("config file: unknown key '" + key + "'");
    }

    mfbench::ExperimentConfig config;
    try {
        if (j.contains("benchmark_id")) config.benchmark_id = j["benchmark_id"].get<std::string>();
        if (j.contains("solver")) {
            const auto& solver = j["solver"];
            for (const auto& [key, value] : solver.items()) {
                if (key != "name" && key != "parameters")
                    throw std::invalid_argument("config file: unknown solver key '" + key + "'");
            }
            if (solver.contains("name")) config.solver.name = solver["name"].get<std::string>();
            if (solver.contains("parameters"))
                for (const auto& [key, value] : solver["parameters"].items())
                    config.solver.parameters[key] = value.get<double>();
        }
        if (j.contains("repeats")) config.repeats = j["repeats"].get<int>();
        if (j.contains("base_seed")) config.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("normalization_mode"))
            config.normalization_mode =
                mfbench::normalization_mode_from(j["normalization_mode"].get<std::string>());
        if (j.contains("workers")) config.workers = j["workers"].get<int>();
    } catch (const mfbench::ordered_json::exception& e) {
        throw std::invalid_argument(std::string("config file: ") + e.what());
    }
    return config;
}

int cmd_run(const RunArgs& args) {
    mfbench::ExperimentConfig config;
    try {
        if (!args.config_path.empty()) config = config_from_json_file(args.config_path);

        // Flags override the config file.
        if (!args.benchmark_id.empty()) config.benchmark_id = args.benchmark_id;
        if (!args.solver_name.empty()) config.solver.name = args.solver_name;
        for (const auto& [key, value] : parse_param_overrides(args.param_items))
            config.solver.parameters[key] = value;
        if (args.repeats >= 0) config.repeats = args.repeats;
        if (args.base_seed >= 0) config.base_seed = static_cast<std::uint64_t>(args.base_seed);
        if (!args.output_dir.empty()) config.output_dir = args.output_dir;
        if (!args.normalization.empty())
            config.normalization_mode = mfbench::normalization_mode_from(args.normalization);
        if (args.workers >= 0) config.workers = args.workers;

        if (config.benchmark_id.empty())
            throw std::invalid_argument("no benchmark selected (--benchmark or config file)");
        if (config.solver.name.empty())
            throw std::invalid_argument("no solver selected (--solver or config file)");
        if (config.output_dir.empty())
            throw std::invalid_argument("no output directory (--output-dir or config file)");
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const mfbench::ExperimentResult result = mfbench::run_and_write(config);
        const mfbench::AggregateReport& agg = result.aggregate_report;
        std::printf("%s + %s: %d run(s) -> %s\n", config.benchmark_id.c_str(),
                    config.solver.name.c_str(), config.repeats,
                    config.output_dir.string().c_str());
        std::printf("median e_x = %s, e_f = %s, e_t = %s\n",
                    short_double(agg.e_x.median).c_str(), short_double(agg.e_f.median).c_str(),
                    short_double(agg.e_t.median).c_str());
        if (agg.e_rmse)
            std::printf("median e_rmse = %s\n", short_double(agg.e_rmse->median).c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

// --- metrics -------------------------------------------------------------------

struct MetricsArgs {
    std::string history_path;
    std::string benchmark_id;
    std::string normalization = "table";
};

int cmd_metrics(const MetricsArgs& args) {
    mfbench::NormalizationMode mode;
    const mfbench::Benchmark* benchmark = nullptr;
    try {
        mode = mfbench::normalization_mode_from(args.normalization);
        benchmark = &mfbench::get_benchmark(args.benchmark_id);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        const std::string text = mfbench::read_text(args.history_path);
        const mfbench::RunHistory history = mfbench::history_from_csv(text, *benchmark);
        const mfbench::MetricsReport report =
            mfbench::metrics_from_history(*benchmark, history, mode);

        mfbench::ordered_json j;
        j["benchmark_id"] = args.benchmark_id;
        j["e_x"] = report.e_x;
        j["e_f"] = report.e_f;
        j["e_t"] = report.e_t;
        if (report.e_rmse) j["e_rmse"] = *report.e_rmse;
        j["normalization_mode"] = mfbench::to_string(report.normalization_mode);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfbench: multifidelity optimization benchmark harness"};
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list", "Print the table of benchmark instances");

    EvaluateArgs eval_args;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "Evaluate one benchmark point (uncharged)");
    eval_cmd->add_option("benchmark", eval_args.benchmark_id, "Benchmark ID, e.g. MF1.1")
        ->required();
    eval_cmd->add_option("--level", eval_args.level, "Fidelity level (1 = highest)")->required();
    eval_cmd->add_option("--x", eval_args.point_text, "Comma-separated coordinates")->required();
    std::int64_t eval_seed = -1;
    eval_cmd->add_option("--seed", eval_seed, "Noise seed (required for noisy benchmarks)");

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a solver experiment and write reports");
    run_cmd->add_option("--config", run_args.config_path, "JSON config file");
    run_cmd->add_option("--benchmark", run_args.benchmark_id, "Benchmark ID");
    run_cmd->add_option("--solver", run_args.solver_name, "Solver name");
    run_cmd->add_option("--param", run_args.param_items,
                        "Solver parameter override key=value (repeatable)");
    run_cmd->add_option("--repeats", run_args.repeats, "Number of repeated runs (default 20)");
    run_cmd->add_option("--base-seed", run_args.base_seed,
                        "Base seed; run r uses base_seed + r (default 1)");
    run_cmd->add_option("--output-dir", run_args.output_dir, "Report directory");
    run_cmd->add_option("--normalization", run_args.normalization,
                        "Normalization mode: table | observed");
    run_cmd->add_option("--workers", run_args.workers,
                        "Worker threads (default: logical processors)");

    MetricsArgs metrics_args;
    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "Recompute metrics from a stored history CSV");
    metrics_cmd->add_option("history", metrics_args.history_path, "History CSV file")
        ->required();
    metrics_cmd->add_option("--benchmark", metrics_args.benchmark_id, "Benchmark ID")
        ->required();
    metrics_cmd->add_option("--normalization", metrics_args.normalization,
                            "Normalization mode: table | observed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (list_cmd->parsed()) return cmd_list();
    if (eval_cmd->parsed()) {
        if (eval_seed >= 0) eval_args.seed = static_cast<std::uint64_t>(eval_seed);
        return cmd_evaluate(eval_args);
    }
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_args);
    return kExitUsage;
}
