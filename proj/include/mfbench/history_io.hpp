#pragma once

// Serialization of run artifacts: history CSVs, convergence-curve CSVs, and
// metric/summary JSON documents. Every format round-trips through the readers
// in this header.
//
// Numeric fields print with %.17g so doubles survive a round trip exactly;
// files are UTF-8 with LF line endings and are written atomically (temp file
// plus rename) so partial outputs never appear under the final name.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfbench/benchmarks.hpp"
#include "mfbench/metrics.hpp"
#include "mfbench/oracle.hpp"

namespace mfbench {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Formatting and parsing primitives
// ---------------------------------------------------------------------------

/// Full-precision decimal rendering: shortest %.17g form, which round-trips
/// IEEE doubles exactly.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace detail {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

inline double parse_double_field(const std::string& field, std::size_t line_no,
                                 const char* column) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw CsvError("parse error at line " + std::to_string(line_no) + ": bad " +
                       column + " value '" + field + "'");
    return value;
}

inline long long parse_int_field(const std::string& field, std::size_t line_no,
                                 const char* column) {
    errno = 0;
    char* end = nullptr;
    const long long value = std::strtoll(field.c_str(), &end, 10);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw CsvError("parse error at line " + std::to_string(line_no) + ": bad " +
                       column + " value '" + field + "'");
    return value;
}

} // namespace detail

/// Writes `content` to `path` atomically: the data lands under a temporary
/// name first and is renamed into place only once fully flushed.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

// ---------------------------------------------------------------------------
// History CSV
// ---------------------------------------------------------------------------

/// Header for a D-dimensional history: index,level,cost,cumulative_cost,
/// off_budget,x_1,...,x_D,value.
inline std::string history_csv_header(int dimension) {
    std::string header = "index,level,cost,cumulative_cost,off_budget";
    for (int k = 1; k <= dimension; ++k) header += ",x_" + std::to_string(k);
    header += ",value";
    return header;
}

inline std::string history_to_csv(const RunHistory& history, int dimension) {
    std::string out = history_csv_header(dimension) + "\n";
    for (const EvaluationRecord& rec : history.records) {
        if (static_cast<int>(rec.point.size()) != dimension)
            throw std::invalid_argument("record dimension does not match benchmark dimension");
        out += std::to_string(rec.index);
        out += ',' + std::to_string(rec.level);
        out += ',' + format_double(rec.cost);
        out += ',' + format_double(rec.cumulative_cost);
        out += ',' + std::string(rec.off_budget ? "1" : "0");
        for (double xk : rec.point) out += ',' + format_double(xk);
        out += ',' + format_double(rec.value);
        out += '\n';
    }
    return out;
}

/// Rebuilds a RunHistory from CSV text. The benchmark supplies the expected
/// dimension, budget, and cost table; the best trace and incumbent are
/// reconstructed from the charged highest-fidelity records. Parse failures
/// report 1-based line numbers (the header is line 1).
inline RunHistory history_from_csv(const std::string& text, const Benchmark& benchmark) {
    const std::vector<std::string> lines = detail::split_lines(text);
    if (lines.empty()) throw detail::CsvError("parse error at line 1: empty history file");

    const int dimension = benchmark.spec.dimension;
    if (lines[0] != history_csv_header(dimension)) {
        // Distinguish a wrong-dimension header from a generally malformed one.
        for (int d = 1; d <= 64; ++d) {
            if (d != dimension && lines[0] == history_csv_header(d))
                throw detail::CsvError(
                    "history has " + std::to_string(d) + " design column(s) but benchmark '" +
                    benchmark.spec.id + "' has dimension " + std::to_string(dimension));
        }
        throw detail::CsvError("parse error at line 1: bad header '" + lines[0] + "'");
    }

    RunHistory history;
    history.benchmark_id = benchmark.spec.id;
    history.budget = benchmark.spec.budget;

    const std::size_t expected_fields = 6 + static_cast<std::size_t>(dimension);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) {
            if (i + 1 == lines.size()) break; // trailing newline
            throw detail::CsvError("parse error at line " + std::to_string(line_no) +
                                   ": empty row");
        }
        const std::vector<std::string> fields = detail::split_fields(lines[i]);
        if (fields.size() != expected_fields)
            throw detail::CsvError("parse error at line " + std::to_string(line_no) + ": got " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(expected_fields));

        EvaluationRecord rec;
        rec.index = static_cast<std::size_t>(detail::parse_int_field(fields[0], line_no, "index"));
        rec.level = static_cast<int>(detail::parse_int_field(fields[1], line_no, "level"));
        rec.cost = detail::parse_double_field(fields[2], line_no, "cost");
        rec.cumulative_cost = detail::parse_double_field(fields[3], line_no, "cumulative_cost");
        const long long off = detail::parse_int_field(fields[4], line_no, "off_budget");
        if (off != 0 && off != 1)
            throw detail::CsvError("parse error at line " + std::to_string(line_no) +
                                   ": off_budget must be 0 or 1");
        rec.off_budget = off == 1;
        rec.point.resize(static_cast<std::size_t>(dimension));
        for (int k = 0; k < dimension; ++k)
            rec.point[static_cast<std::size_t>(k)] = detail::parse_double_field(
                fields[5 + static_cast<std::size_t>(k)], line_no, "design coordinate");
        rec.value = detail::parse_double_field(fields.back(), line_no, "value");

        if (rec.index != history.records.size())
            throw detail::CsvError("parse error at line " + std::to_string(line_no) +
                                   ": index " + std::to_string(rec.index) +
                                   " out of sequence");
        if (rec.level < 1 || rec.level > benchmark.spec.levels())
            throw detail::CsvError("parse error at line " + std::to_string(line_no) +
                                   ": level " + std::to_string(rec.level) + " outside 1.." +
                                   std::to_string(benchmark.spec.levels()));

        if (!rec.off_budget) {
            history.spent = rec.cumulative_cost;
            if (rec.level == 1 &&
                (!history.incumbent || rec.value < history.incumbent->value)) {
                BestSoFar best{rec.cumulative_cost, rec.point, rec.value};
                history.best_trace.push_back(best);
                history.incumbent = std::move(best);
            }
        }
        history.records.push_back(std::move(rec));
    }
    return history;
}

// ---------------------------------------------------------------------------
// Convergence-curve CSV
// ---------------------------------------------------------------------------

/// Columns: cost, one best-value column per run (named by seed), median.
/// Undefined cells (before a run's first highest-fidelity evaluation) print
/// as nan.
inline std::string convergence_to_csv(const ConvergenceCurves& curves) {
    std::string out = "cost";
    for (std::uint64_t seed : curves.seeds) out += ",run_" + std::to_string(seed);
    out += ",median\n";
    for (std::size_t i = 0; i < curves.costs.size(); ++i) {
        out += format_double(curves.costs[i]);
        for (const std::vector<double>& row : curves.per_run)
            out += ',' + format_double(row[i]);
        out += ',' + format_double(curves.median[i]);
        out += '\n';
    }
    return out;
}

inline ConvergenceCurves convergence_from_csv(const std::string& text) {
    const std::vector<std::string> lines = detail::split_lines(text);
    if (lines.empty()) throw detail::CsvError("parse error at line 1: empty convergence file");
    const std::vector<std::string> header = detail::split_fields(lines[0]);
    if (header.size() < 3 || header.front() != "cost" || header.back() != "median")
        throw detail::CsvError("parse error at line 1: bad header '" + lines[0] + "'");

    ConvergenceCurves curves;
    for (std::size_t c = 1; c + 1 < header.size(); ++c) {
        if (header[c].rfind("run_", 0) != 0)
            throw detail::CsvError("parse error at line 1: bad run column '" + header[c] + "'");
        curves.seeds.push_back(static_cast<std::uint64_t>(
            detail::parse_int_field(header[c].substr(4), 1, "run seed")));
    }
    curves.per_run.resize(curves.seeds.size());

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty() && i + 1 == lines.size()) break;
        const std::vector<std::string> fields = detail::split_fields(lines[i]);
        if (fields.size() != header.size())
            throw detail::CsvError("parse error at line " + std::to_string(line_no) + ": got " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(header.size()));
        curves.costs.push_back(detail::parse_double_field(fields[0], line_no, "cost"));
        for (std::size_t c = 0; c < curves.seeds.size(); ++c)
            curves.per_run[c].push_back(
                detail::parse_double_field(fields[c + 1], line_no, "best value"));
        curves.median.push_back(detail::parse_double_field(fields.back(), line_no, "median"));
    }
    return curves;
}

// ---------------------------------------------------------------------------
// Metrics and summary JSON
// ---------------------------------------------------------------------------

inline ordered_json metrics_to_json(const MetricsReport& report, std::uint64_t seed) {
    ordered_json j;
    j["seed"] = seed;
    j["e_x"] = report.e_x;
    j["e_f"] = report.e_f;
    j["e_t"] = report.e_t;
    if (report.e_rmse) j["e_rmse"] = *report.e_rmse;
    j["normalization_mode"] = to_string(report.normalization_mode);
    return j;
}

inline ordered_json stat_summary_to_json(const StatSummary& s) {
    ordered_json j;
    j["median"] = s.median;
    j["mean"] = s.mean;
    j["std"] = s.std_dev;
    j["min"] = s.min;
    j["max"] = s.max;
    j["iqr"] = s.iqr;
    return j;
}

inline ordered_json summary_to_json(const std::string& benchmark_id,
                                    const std::string& solver_name,
                                    const std::map<std::string, double>& solver_parameters,
                                    int repeats, std::uint64_t base_seed,
                                    const AggregateReport& aggregate_report,
                                    const std::vector<std::uint64_t>& seeds,
                                    const std::vector<MetricsReport>& reports) {
    ordered_json j;
    j["benchmark_id"] = benchmark_id;
    j["solver"] = ordered_json{{"name", solver_name}, {"parameters", solver_parameters}};
    j["repeats"] = repeats;
    j["base_seed"] = base_seed;
    j["normalization_mode"] = to_string(aggregate_report.normalization_mode);

    ordered_json metrics;
    metrics["e_x"] = stat_summary_to_json(aggregate_report.e_x);
    metrics["e_f"] = stat_summary_to_json(aggregate_report.e_f);
    metrics["e_t"] = stat_summary_to_json(aggregate_report.e_t);
    if (aggregate_report.e_rmse)
        metrics["e_rmse"] = stat_summary_to_json(*aggregate_report.e_rmse);
    j["metrics"] = metrics;

    ordered_json runs = ordered_json::array();
    for (std::size_t r = 0; r < reports.size(); ++r) {
        ordered_json run;
        run["seed"] = seeds[r];
        run["e_x"] = reports[r].e_x;
        run["e_f"] = reports[r].e_f;
        run["e_t"] = reports[r].e_t;
        if (reports[r].e_rmse) run["e_rmse"] = *reports[r].e_rmse;
        runs.push_back(std::move(run));
    }
    j["runs"] = runs;
    return j;
}

} // namespace mfbench
