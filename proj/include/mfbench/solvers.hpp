#pragma once

// The optimizer contract and three reference baselines. Baselines are
// deliberately simple yardsticks, fully determined by their parameters and
// the seed:
//
//   random_search       - uniform highest-fidelity draws until the budget
//                         refuses.
//   lhs_pattern_search  - Latin-hypercube start (initial_samples points at
//                         the highest fidelity), then compass search in
//                         unit-scaled coordinates: poll +/- step along each
//                         axis, recentre on first improvement, contract the
//                         step by `contraction` when a full poll fails, stop
//                         at min_step or budget refusal.
//   mf_screening        - spends screen_fraction of the budget on a Latin-
//                         hypercube sweep at the cheapest fidelity, promotes
//                         the top_candidates best screened points to the
//                         highest fidelity, then compass-polishes the
//                         incumbent with the remaining budget.
//
// Every query goes through the oracle; refusal ends the run promptly.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfbench/core.hpp"
#include "mfbench/metrics.hpp"
#include "mfbench/noise.hpp"
#include "mfbench/oracle.hpp"
#include "mfbench/sampling.hpp"

namespace mfbench {

/// Named solver plus its parameter overrides and seed.
struct SolverConfig {
    std::string name;
    std::map<std::string, double> parameters; ///< overrides; unknown keys rejected
    std::uint64_t seed = 0;
};

/// What a solver hands back: the reported incumbent and, for surrogate-based
/// methods, a predictor over the domain (empty for the baselines here).
struct SolverResult {
    DesignPoint incumbent;
    Predictor predictor; ///< empty function when the solver builds no surrogate
};

using SolveFn = SolverResult (*)(const std::map<std::string, double>& params,
                                 std::uint64_t seed, OracleRun& run);
using ValidateFn = void (*)(const std::map<std::string, double>& params);

struct SolverEntry {
    std::string name;
    std::string description;
    std::map<std::string, double> default_parameters;
    ValidateFn validate;
    SolveFn solve;
};

namespace detail {

inline DesignPoint box_center(const Bounds& bounds) {
    DesignPoint c(bounds.dimension());
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = 0.5 * (bounds.lower[k] + bounds.upper[k]);
    return c;
}

inline DesignPoint incumbent_or_center(const OracleRun& run) {
    if (run.incumbent()) return run.incumbent()->point;
    return box_center(run.spec().bounds);
}

/// Compass search at the highest fidelity, working in unit-scaled
/// coordinates from the oracle's current incumbent. Returns when the step
/// shrinks below min_step or the budget refuses.
inline void compass_polish(OracleRun& run, double initial_step, double contraction,
                           double min_step) {
    if (!run.incumbent()) return;
    const Bounds& bounds = run.spec().bounds;
    DesignPoint u = scale_to_unit(run.incumbent()->point, bounds);
    double best = run.incumbent()->value;
    double step = initial_step;

    while (step >= min_step) {
        bool improved = false;
        for (std::size_t axis = 0; axis < u.size() && !improved; ++axis) {
            for (double dir : {+1.0, -1.0}) {
                DesignPoint trial = u;
                trial[axis] = std::clamp(trial[axis] + dir * step, 0.0, 1.0);
                if (trial[axis] == u[axis]) continue; // clamped onto itself
                const std::optional<double> value = run.query(1, unscale(trial, bounds));
                if (!value) return; // budget refused: stop immediately
                if (*value < best) {
                    best = *value;
                    u = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= contraction;
    }
}

inline double param(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end())
        throw std::logic_error("solver parameter '" + key + "' missing after merge");
    return it->second;
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

// --- random_search ---------------------------------------------------------

inline void validate_random_search(const std::map<std::string, double>&) {}

inline SolverResult solve_random_search(const std::map<std::string, double>&,
                                        std::uint64_t seed, OracleRun& run) {
    const Bounds& bounds = run.spec().bounds;
    std::mt19937_64 rng(derive_seed(seed, 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        DesignPoint x(bounds.dimension());
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = bounds.lower[k] + unit(rng) * (bounds.upper[k] - bounds.lower[k]);
        if (!run.query(1, x)) break;
    }
    return {incumbent_or_center(run), Predictor{}};
}

// --- lhs_pattern_search ----------------------------------------------------

inline void validate_lhs_pattern_search(const std::map<std::string, double>& p) {
    require(param(p, "initial_samples") >= 1.0, "initial_samples must be >= 1");
    require(param(p, "initial_step") > 0.0, "initial_step must be > 0");
    const double c = param(p, "contraction");
    require(c > 0.0 && c < 1.0, "contraction must be in (0, 1)");
    const double m = param(p, "min_step");
    require(m > 0.0 && m <= param(p, "initial_step"),
            "min_step must be in (0, initial_step]");
}

inline SolverResult solve_lhs_pattern_search(const std::map<std::string, double>& p,
                                             std::uint64_t seed, OracleRun& run) {
    const auto n = static_cast<std::size_t>(param(p, "initial_samples"));
    const std::vector<DesignPoint> start =
        latin_hypercube(run.spec().bounds, n, derive_seed(seed, 1));
    for (const DesignPoint& x : start)
        if (!run.query(1, x)) return {incumbent_or_center(run), Predictor{}};

    compass_polish(run, param(p, "initial_step"), param(p, "contraction"),
                   param(p, "min_step"));
    return {incumbent_or_center(run), Predictor{}};
}

// --- mf_screening ----------------------------------------------------------

inline void validate_mf_screening(const std::map<std::string, double>& p) {
    const double frac = param(p, "screen_fraction");
    require(frac > 0.0 && frac < 1.0, "screen_fraction must be in (0, 1)");
    require(param(p, "top_candidates") >= 1.0, "top_candidates must be >= 1");
    require(param(p, "initial_step") > 0.0, "initial_step must be > 0");
    const double c = param(p, "contraction");
    require(c > 0.0 && c < 1.0, "contraction must be in (0, 1)");
    const double m = param(p, "min_step");
    require(m > 0.0 && m <= param(p, "initial_step"),
            "min_step must be in (0, initial_step]");
}

inline SolverResult solve_mf_screening(const std::map<std::string, double>& p,
                                       std::uint64_t seed, OracleRun& run) {
    const BenchmarkSpec& spec = run.spec();
    const int lowest = spec.levels();
    const double lambda_low = spec.cost_of_level(lowest);
    const double frac = param(p, "screen_fraction");
    const auto n_screen = static_cast<std::size_t>(
        std::max(1.0, std::floor(spec.budget * frac / lambda_low)));

    // Cheap sweep: rank the space-filling sample by lowest-fidelity value.
    const std::vector<DesignPoint> sweep =
        latin_hypercube(spec.bounds, n_screen, derive_seed(seed, 1));
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(sweep.size());
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const std::optional<double> value = run.query(lowest, sweep[i]);
        if (!value) return {incumbent_or_center(run), Predictor{}};
        ranked.emplace_back(*value, i);
    }
    std::sort(ranked.begin(), ranked.end());

    // Promote the most promising candidates to the highest fidelity.
    const auto top = std::min<std::size_t>(
        static_cast<std::size_t>(param(p, "top_candidates")), ranked.size());
    for (std::size_t i = 0; i < top; ++i)
        if (!run.query(1, sweep[ranked[i].second]))
            return {incumbent_or_center(run), Predictor{}};

    compass_polish(run, param(p, "initial_step"), param(p, "contraction"),
                   param(p, "min_step"));
    return {incumbent_or_center(run), Predictor{}};
}

inline std::map<std::string, SolverEntry> build_solver_registry() {
    std::map<std::string, SolverEntry> reg;
    reg.emplace("random_search",
                SolverEntry{"random_search",
                            "uniform random highest-fidelity sampling until the budget refuses",
                            {},
                            &validate_random_search,
                            &solve_random_search});
    reg.emplace("lhs_pattern_search",
                SolverEntry{"lhs_pattern_search",
                            "Latin-hypercube start plus compass pattern search, highest "
                            "fidelity only",
                            {{"initial_samples", 10.0},
                             {"initial_step", 0.25},
                             {"contraction", 0.5},
                             {"min_step", 1e-6}},
                            &validate_lhs_pattern_search,
                            &solve_lhs_pattern_search});
    reg.emplace("mf_screening",
                SolverEntry{"mf_screening",
                            "lowest-fidelity Latin-hypercube screening, top-candidate "
                            "promotion, then compass polish at the highest fidelity",
                            {{"screen_fraction", 0.25},
                             {"top_candidates", 5.0},
                             {"initial_step", 0.1},
                             {"contraction", 0.5},
                             {"min_step", 1e-6}},
                            &validate_mf_screening,
                            &solve_mf_screening});
    return reg;
}

} // namespace detail

inline const std::map<std::string, SolverEntry>& solver_registry() {
    static const std::map<std::string, SolverEntry> reg = detail::build_solver_registry();
    return reg;
}

inline std::vector<std::string> solver_names() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : solver_registry()) names.push_back(name);
    return names;
}

inline const SolverEntry& get_solver(const std::string& name) {
    const auto& reg = solver_registry();
    const auto it = reg.find(name);
    if (it == reg.end()) {
        std::string valid;
        for (const auto& [key, entry] : reg) {
            if (!valid.empty()) valid += ", ";
            valid += key;
        }
        throw std::out_of_range("unknown solver '" + name + "'; valid names: " + valid);
    }
    return it->second;
}

/// Applies overrides to the solver's defaults, rejecting unknown keys, and
/// runs the solver's own validation on the merged set.
inline std::map<std::string, double> resolve_parameters(
    const SolverEntry& entry, const std::map<std::string, double>& overrides) {
    std::map<std::string, double> merged = entry.default_parameters;
    for (const auto& [key, value] : overrides) {
        const auto it = merged.find(key);
        if (it == merged.end()) {
            std::string valid;
            for (const auto& [k, v] : entry.default_parameters) {
                if (!valid.empty()) valid += ", ";
                valid += k;
            }
            throw std::invalid_argument("solver '" + entry.name + "' has no parameter '" +
                                        key + "'" +
                                        (valid.empty() ? " (it takes none)"
                                                       : "; valid keys: " + valid));
        }
        it->second = value;
    }
    entry.validate(merged);
    return merged;
}

/// Front door: resolves the config against the registry and runs the solver.
inline SolverResult run_solver(const SolverConfig& config, OracleRun& run) {
    const SolverEntry& entry = get_solver(config.name);
    const std::map<std::string, double> params = resolve_parameters(entry, config.parameters);
    return entry.solve(params, config.seed, run);
}

} // namespace mfbench
