#pragma once

// Performance metrics: the goal-insensitive normalized RMSE over a validation
// sample, the goal-sensitive errors of the found optimum (design-space,
// objective, and their combination), cross-run aggregation, and the
// cost-resampled convergence curves.
//
// Design-space error works in unit-scaled coordinates and divides by sqrt(D).
// For benchmarks whose optimum is a manifold rather than a point, it is the
// scaled Euclidean distance to the nearest point of the optimal set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfbench/benchmarks.hpp"
#include "mfbench/core.hpp"
#include "mfbench/oracle.hpp"
#include "mfbench/sampling.hpp"

namespace mfbench {

enum class NormalizationMode { Table, Observed };

inline std::string to_string(NormalizationMode mode) {
    return mode == NormalizationMode::Table ? "table" : "observed";
}

inline NormalizationMode normalization_mode_from(const std::string& text) {
    if (text == "table") return NormalizationMode::Table;
    if (text == "observed") return NormalizationMode::Observed;
    throw std::invalid_argument("unknown normalization mode '" + text +
                                "'; expected 'table' or 'observed'");
}

/// Surrogate predictor over the benchmark domain (optional solver output).
using Predictor = std::function<double(const DesignPoint&)>;

/// Paired truth/prediction values over a validation design.
struct ValidationSample {
    std::vector<DesignPoint> points;
    std::vector<double> truth;     ///< highest-fidelity (noise-free) values
    std::vector<double> predicted; ///< surrogate values

    void validate() const {
        if (points.size() != truth.size() || truth.size() != predicted.size())
            throw std::invalid_argument("validation sample: mismatched lengths");
        if (points.size() < 2)
            throw std::invalid_argument("validation sample: need at least 2 points");
    }
};

/// Metrics of one run.
struct MetricsReport {
    std::optional<double> e_rmse; ///< absent when the solver has no predictor
    double e_x = 0.0;
    double e_f = 0.0;
    double e_t = 0.0;
    NormalizationMode normalization_mode = NormalizationMode::Table;
};

// ---------------------------------------------------------------------------
// Elementary metrics
// ---------------------------------------------------------------------------

/// Normalized RMSE: sqrt(mean((truth - predicted)^2)) / (f_max - f_min).
inline double rmse_error(const ValidationSample& sample, double f_min, double f_max) {
    sample.validate();
    if (!(f_max > f_min))
        throw std::invalid_argument("rmse_error: degenerate normalization (f_max <= f_min)");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < sample.truth.size(); ++i) {
        const double d = sample.truth[i] - sample.predicted[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(sample.truth.size())) / (f_max - f_min);
}

namespace detail {

/// Golden-section refinement of a scalar minimum on [a, b].
template <typename F>
double minimize_scalar(F&& f, double a, double b, int iterations = 80) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

/// Squared scaled distance from x_hat to the curve {x1 * x2 = c} inside the
/// box: a dense bracket scan followed by golden-section refinement.
inline double hyperbola_distance_sq(const DesignPoint& x_hat, double c, const Bounds& bounds) {
    const double w0 = bounds.upper[0] - bounds.lower[0];
    const double w1 = bounds.upper[1] - bounds.lower[1];
    const double t_lo = std::max(bounds.lower[0], c / bounds.upper[1]);
    const double t_hi = std::min(bounds.upper[0], c / bounds.lower[1]);
    if (!(t_lo <= t_hi))
        throw std::invalid_argument("optimal curve does not intersect the domain");

    const auto dist_sq = [&](double t) {
        const double d0 = (x_hat[0] - t) / w0;
        const double d1 = (x_hat[1] - c / t) / w1;
        return d0 * d0 + d1 * d1;
    };

    const int scan = 1024;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i <= scan; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / scan;
        const double v = dist_sq(t);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    const double a = t_lo + (t_hi - t_lo) * std::max(0, best_i - 1) / scan;
    const double b = t_lo + (t_hi - t_lo) * std::min(scan, best_i + 1) / scan;
    return std::min(best, minimize_scalar(dist_sq, a, b));
}

} // namespace detail

/// Scaled design-space error ||x_hat - x*|| / sqrt(D), with distance-to-set
/// semantics for manifold optima.
inline double error_x(const DesignPoint& x_hat, const ReferenceValues& reference,
                      const Bounds& bounds) {
    bounds.require_inside(x_hat);
    const std::size_t d = bounds.dimension();
    const DesignPoint u = scale_to_unit(x_hat, bounds);

    double dist = 0.0;
    switch (reference.optimum.kind) {
        case OptimumKind::Point: {
            const DesignPoint v = scale_to_unit(reference.optimum.point, bounds);
            double sum_sq = 0.0;
            for (std::size_t k = 0; k < d; ++k) sum_sq += (u[k] - v[k]) * (u[k] - v[k]);
            dist = std::sqrt(sum_sq);
            break;
        }
        case OptimumKind::FirstCoordinateZero: {
            // Projection onto the face x_1 = 0 moves only the first scaled
            // coordinate.
            const double face = (0.0 - bounds.lower[0]) / (bounds.upper[0] - bounds.lower[0]);
            dist = std::abs(u[0] - face);
            break;
        }
        case OptimumKind::CoordinateProductLevel: {
            if (d != 2)
                throw std::invalid_argument("product-level optimum defined for D = 2 only");
            double best = std::numeric_limits<double>::infinity();
            for (double c : reference.optimum.product_levels)
                best = std::min(best, detail::hyperbola_distance_sq(x_hat, c, bounds));
            dist = std::sqrt(best);
            break;
        }
    }
    return dist / std::sqrt(static_cast<double>(d));
}

/// Normalized objective error (f(x_hat) - f_min) / (f_max - f_min), unclamped.
inline double error_f(double f_at_x_hat, double f_min, double f_max) {
    if (!(f_max > f_min))
        throw std::invalid_argument("error_f: degenerate normalization (f_max <= f_min)");
    return (f_at_x_hat - f_min) / (f_max - f_min);
}

/// Combined error sqrt((e_x^2 + e_f^2) / 2). e_x is a distance and must be
/// non-negative; e_f enters squared and may be slightly negative when an
/// incumbent beats the rounded reference minimum.
inline double error_t(double e_x, double e_f) {
    if (e_x < 0.0) throw std::invalid_argument("error_t: e_x must be >= 0");
    return std::sqrt((e_x * e_x + e_f * e_f) / 2.0);
}

// ---------------------------------------------------------------------------
// Validation sampling
// ---------------------------------------------------------------------------

/// Validation design for one benchmark: full-factorial for D <= 3 (1001
/// points for D = 1, 101^2 for D = 2, 41^3 for D = 3), Latin hypercube of
/// 1000*D points for D >= 4, seeded deterministically from the benchmark ID.
inline std::vector<DesignPoint> validation_points(const BenchmarkSpec& spec) {
    switch (spec.dimension) {
        case 1: return full_factorial_grid(spec.bounds, 1001);
        case 2: return full_factorial_grid(spec.bounds, 101);
        case 3: return full_factorial_grid(spec.bounds, 41);
        default:
            return latin_hypercube(spec.bounds, 1000 * static_cast<std::size_t>(spec.dimension),
                                   fnv1a_hash(spec.id));
    }
}

/// Evaluates truth (uncharged noise-free highest fidelity) and the predictor
/// over the validation design.
inline ValidationSample build_validation_sample(const Benchmark& benchmark,
                                                const Predictor& predictor) {
    if (!predictor) throw std::invalid_argument("build_validation_sample: null predictor");
    ValidationSample sample;
    sample.points = validation_points(benchmark.spec);
    sample.truth.reserve(sample.points.size());
    sample.predicted.reserve(sample.points.size());
    for (const DesignPoint& x : sample.points) {
        sample.truth.push_back(benchmark.eval(1, x, nullptr));
        sample.predicted.push_back(predictor(x));
    }
    return sample;
}

// ---------------------------------------------------------------------------
// Per-run metrics
// ---------------------------------------------------------------------------

/// Normalization pair for one history; table mode reads the reference values,
/// observed mode the extremes of the charged highest-fidelity evaluations.
inline std::pair<double, double> normalization_pair(const Benchmark& benchmark,
                                                    const RunHistory& history,
                                                    NormalizationMode mode) {
    if (mode == NormalizationMode::Table)
        return {benchmark.spec.reference.f_min, benchmark.spec.reference.f_max};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const EvaluationRecord& rec : history.records) {
        if (rec.off_budget || rec.level != 1) continue;
        lo = std::min(lo, rec.value);
        hi = std::max(hi, rec.value);
    }
    if (!(hi > lo))
        throw std::invalid_argument(
            "observed normalization needs at least two distinct highest-fidelity values");
    return {lo, hi};
}

/// Computes the full metrics report for a finished run. The reported optimum
/// x_hat is the final off-budget instrumentation record when present (the
/// solver-reported incumbent), otherwise the best charged highest-fidelity
/// point; its objective value is a noise-free highest-fidelity evaluation, so
/// recomputation from a stored history is deterministic.
inline MetricsReport metrics_from_history(const Benchmark& benchmark, const RunHistory& history,
                                          NormalizationMode mode,
                                          const Predictor* predictor = nullptr) {
    if (history.benchmark_id != benchmark.spec.id)
        throw std::invalid_argument("history belongs to '" + history.benchmark_id +
                                    "', not '" + benchmark.spec.id + "'");

    const EvaluationRecord* reported = nullptr;
    for (const EvaluationRecord& rec : history.records)
        if (rec.off_budget) reported = &rec;
    if (!reported && !history.incumbent)
        throw std::invalid_argument("history has no highest-fidelity evaluation; "
                                    "goal metrics are undefined");

    const auto [f_min, f_max] = normalization_pair(benchmark, history, mode);
    const DesignPoint& x_hat = reported ? reported->point : history.incumbent->point;
    const double f_at_x_hat = reported ? reported->value : benchmark.eval(1, x_hat, nullptr);

    MetricsReport report;
    report.normalization_mode = mode;
    report.e_x = error_x(x_hat, benchmark.spec.reference, benchmark.spec.bounds);
    report.e_f = error_f(f_at_x_hat, f_min, f_max);
    report.e_t = error_t(report.e_x, report.e_f);
    if (predictor && *predictor)
        report.e_rmse = rmse_error(build_validation_sample(benchmark, *predictor), f_min, f_max);
    return report;
}

// ---------------------------------------------------------------------------
// Cross-run aggregation
// ---------------------------------------------------------------------------

/// Location and spread of one metric across repeats.
struct StatSummary {
    double median = 0.0;
    double mean = 0.0;
    double std_dev = 0.0; ///< sample standard deviation; 0 for a single value
    double min = 0.0;
    double max = 0.0;
    double iqr = 0.0;
};

namespace detail {

/// Linear-interpolation quantile (the common "type 7" rule) on sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace detail

inline StatSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    StatSummary s;
    s.min = values.front();
    s.max = values.back();
    s.median = detail::quantile_sorted(values, 0.5);
    s.iqr = detail::quantile_sorted(values, 0.75) - detail::quantile_sorted(values, 0.25);

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(sq / static_cast<double>(n - 1));
    }
    return s;
}

/// Statistics of each metric across repeats; e_rmse is aggregated only when
/// every report carries it.
struct AggregateReport {
    StatSummary e_x;
    StatSummary e_f;
    StatSummary e_t;
    std::optional<StatSummary> e_rmse;
    NormalizationMode normalization_mode = NormalizationMode::Table;
};

inline AggregateReport aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
    std::vector<double> xs, fs, ts, rs;
    for (const MetricsReport& r : reports) {
        xs.push_back(r.e_x);
        fs.push_back(r.e_f);
        ts.push_back(r.e_t);
        if (r.e_rmse) rs.push_back(*r.e_rmse);
    }
    AggregateReport agg;
    agg.e_x = summarize(std::move(xs));
    agg.e_f = summarize(std::move(fs));
    agg.e_t = summarize(std::move(ts));
    if (rs.size() == reports.size()) agg.e_rmse = summarize(std::move(rs));
    agg.normalization_mode = reports.front().normalization_mode;
    return agg;
}

// ---------------------------------------------------------------------------
// Convergence curves
// ---------------------------------------------------------------------------

/// Best-so-far traces resampled on a shared cost grid of 101 points from 0 to
/// the budget. Grid cells before a run's first highest-fidelity evaluation
/// are NaN; afterwards the last best value carries forward. The median column
/// is defined only where every run has a value.
struct ConvergenceCurves {
    std::vector<double> costs;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> per_run; ///< [run][grid index]
    std::vector<double> median;
};

inline ConvergenceCurves resample_best_traces(const std::vector<RunHistory>& runs,
                                              int grid_points = 101) {
    if (runs.empty()) throw std::invalid_argument("resample_best_traces: no runs");
    if (grid_points < 2) throw std::invalid_argument("resample_best_traces: need >= 2 points");
    const double budget = runs.front().budget;
    for (const RunHistory& run : runs)
        if (run.budget != budget)
            throw std::invalid_argument("resample_best_traces: mixed budgets");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    ConvergenceCurves curves;
    curves.costs.resize(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
        curves.costs[static_cast<std::size_t>(i)] = budget * i / (grid_points - 1);

    for (const RunHistory& run : runs) {
        curves.seeds.push_back(run.seed);
        std::vector<double> row(curves.costs.size(), nan);
        std::size_t next = 0; // next best_trace entry to absorb
        double current = nan;
        for (std::size_t i = 0; i < curves.costs.size(); ++i) {
            while (next < run.best_trace.size() &&
                   run.best_trace[next].cumulative_cost <= curves.costs[i] + 1e-12) {
                current = run.best_trace[next].value;
                ++next;
            }
            row[i] = current;
        }
        curves.per_run.push_back(std::move(row));
    }

    curves.median.resize(curves.costs.size(), nan);
    std::vector<double> column;
    for (std::size_t i = 0; i < curves.costs.size(); ++i) {
        column.clear();
        bool all_defined = true;
        for (const std::vector<double>& row : curves.per_run) {
            if (std::isnan(row[i])) {
                all_defined = false;
                break;
            }
            column.push_back(row[i]);
        }
        if (!all_defined) continue;
        std::sort(column.begin(), column.end());
        curves.median[i] = detail::quantile_sorted(column, 0.5);
    }
    return curves;
}

} // namespace mfbench
