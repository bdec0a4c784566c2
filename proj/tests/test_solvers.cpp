#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mfbench/metrics.hpp"
#include "mfbench/oracle.hpp"
#include "mfbench/solvers.hpp"

using namespace mfbench;

namespace {

RunHistory run_to_history(const std::string& solver, std::uint64_t seed,
                          const std::string& benchmark_id,
                          std::map<std::string, double> overrides = {}) {
    const Benchmark& bench = get_benchmark(benchmark_id);
    OracleRun run(bench, seed);
    SolverConfig config{solver, std::move(overrides), seed};
    const SolverResult result = run_solver(config, run);
    run.append_off_budget_record(result.incumbent);
    return run.finalize();
}

double level_cost(const RunHistory& h, int level) {
    double total = 0.0;
    for (const EvaluationRecord& rec : h.records)
        if (rec.level == level && !rec.off_budget) total += rec.cost;
    return total;
}

bool same_records(const RunHistory& a, const RunHistory& b) {
    if (a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const EvaluationRecord& ra = a.records[i];
        const EvaluationRecord& rb = b.records[i];
        if (ra.level != rb.level || ra.point != rb.point || ra.value != rb.value ||
            ra.cost != rb.cost || ra.off_budget != rb.off_budget)
            return false;
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// Registry and parameter handling
// ---------------------------------------------------------------------------

TEST_CASE("solver registry lists the three baselines", "[solvers]") {
    const std::vector<std::string> names = solver_names();
    REQUIRE(names.size() >= 3);
    CHECK(std::count(names.begin(), names.end(), "random_search") == 1);
    CHECK(std::count(names.begin(), names.end(), "lhs_pattern_search") == 1);
    CHECK(std::count(names.begin(), names.end(), "mf_screening") == 1);
    for (const std::string& name : names) {
        const SolverEntry& entry = get_solver(name);
        CHECK(entry.name == name);
        CHECK_FALSE(entry.description.empty());
        // Defaults must pass the solver's own validation.
        CHECK_NOTHROW(resolve_parameters(entry, {}));
    }
}

TEST_CASE("unknown solver names are rejected with the valid list", "[solvers]") {
    try {
        get_solver("gradient_descent");
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        const std::string msg = e.what();
        CHECK(msg.find("gradient_descent") != std::string::npos);
        CHECK(msg.find("random_search") != std::string::npos);
    }
}

TEST_CASE("unknown parameter keys are rejected", "[solvers]") {
    const SolverEntry& screening = get_solver("mf_screening");
    try {
        resolve_parameters(screening, {{"screen_fractoin", 0.3}});
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("screen_fractoin") != std::string::npos);
        CHECK(msg.find("screen_fraction") != std::string::npos); // lists valid keys
    }

    const SolverEntry& random = get_solver("random_search");
    try {
        resolve_parameters(random, {{"initial_step", 0.1}});
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("takes none") != std::string::npos);
    }
}

TEST_CASE("overrides replace defaults and validation runs on the merge", "[solvers]") {
    const SolverEntry& entry = get_solver("lhs_pattern_search");
    const auto merged = resolve_parameters(entry, {{"initial_step", 0.1}});
    CHECK(merged.at("initial_step") == 0.1);
    CHECK(merged.at("initial_samples") == 10.0);
    CHECK(merged.at("contraction") == 0.5);
    CHECK(merged.at("min_step") == 1e-6);

    CHECK_THROWS_AS(resolve_parameters(entry, {{"contraction", 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_parameters(entry, {{"contraction", 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_parameters(entry, {{"initial_samples", 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_parameters(entry, {{"min_step", 0.5}}),
                    std::invalid_argument); // min_step > initial_step

    const SolverEntry& screening = get_solver("mf_screening");
    CHECK_THROWS_AS(resolve_parameters(screening, {{"screen_fraction", 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_parameters(screening, {{"screen_fraction", 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_parameters(screening, {{"top_candidates", 0.0}}),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// random_search
// ---------------------------------------------------------------------------

TEST_CASE("random search exhausts the budget at the highest fidelity", "[solvers]") {
    const RunHistory h = run_to_history("random_search", 11, "MF1.1");
    CHECK(h.spent == 100.0);
    // 100 charged records plus the reported-incumbent instrumentation entry.
    REQUIRE(h.records.size() == 101);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(h.records[i].level == 1);
        CHECK(h.records[i].off_budget == false);
        CHECK(h.spent <= h.budget);
    }
    CHECK(h.records.back().off_budget == true);
    REQUIRE(h.incumbent.has_value());
    CHECK(h.records.back().point == h.incumbent->point);
}

TEST_CASE("random search lands in the Forrester basin on median", "[solvers]") {
    const Benchmark& bench = get_benchmark("MF1.1");
    std::vector<MetricsReport> reports;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RunHistory h = run_to_history("random_search", seed, "MF1.1");
        reports.push_back(metrics_from_history(bench, h, NormalizationMode::Table));
    }
    const AggregateReport agg = aggregate(reports);
    CHECK(agg.e_f.median < 0.05);
}

TEST_CASE("solvers are reproducible per seed and vary across seeds", "[solvers]") {
    for (const std::string& name :
         {std::string("random_search"), std::string("lhs_pattern_search"),
          std::string("mf_screening")}) {
        const RunHistory a = run_to_history(name, 42, "MF1.1");
        const RunHistory b = run_to_history(name, 42, "MF1.1");
        INFO("solver " << name);
        CHECK(same_records(a, b));
        const RunHistory c = run_to_history(name, 43, "MF1.1");
        CHECK_FALSE(same_records(a, c));
    }
}

// ---------------------------------------------------------------------------
// compass polish / lhs_pattern_search
// ---------------------------------------------------------------------------

TEST_CASE("compass polish strictly improves from the Rosenbrock center", "[solvers]") {
    const Benchmark& bench = get_benchmark("MF2.1");
    OracleRun run(bench, 1);
    const std::optional<double> center = run.query(1, {0.0, 0.0});
    REQUIRE(center.has_value());
    CHECK(*center == 1.0); // 100*(0-0)^2 + (0-1)^2

    detail::compass_polish(run, 0.25, 0.5, 1e-6);
    REQUIRE(run.incumbent().has_value());
    CHECK(run.incumbent()->value < 1.0);
    CHECK(run.spent() <= run.budget());
}

TEST_CASE("pattern search improves on its space-filling start", "[solvers]") {
    const RunHistory h = run_to_history("lhs_pattern_search", 7, "MF2.1");
    REQUIRE(h.records.size() > 10);
    double initial_best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 10; ++i)
        initial_best = std::min(initial_best, h.records[i].value);
    REQUIRE(h.incumbent.has_value());
    CHECK(h.incumbent->value < initial_best);
    CHECK(h.spent <= h.budget);
    // Highest fidelity only.
    for (const EvaluationRecord& rec : h.records) CHECK(rec.level == 1);
}

TEST_CASE("descent trace is strictly decreasing", "[solvers]") {
    const RunHistory h = run_to_history("lhs_pattern_search", 3, "MF2.1");
    REQUIRE(h.best_trace.size() >= 2);
    for (std::size_t i = 1; i < h.best_trace.size(); ++i) {
        CHECK(h.best_trace[i].value < h.best_trace[i - 1].value);
        CHECK(h.best_trace[i].cumulative_cost >= h.best_trace[i - 1].cumulative_cost);
    }
}

// ---------------------------------------------------------------------------
// mf_screening
// ---------------------------------------------------------------------------

TEST_CASE("screening sweeps the cheapest level before promoting", "[solvers]") {
    const RunHistory h = run_to_history("mf_screening", 5, "MF3.1");
    CHECK(h.spent <= 200.0);

    // The cheap sweep comes first; every charged level-1 record follows it.
    std::size_t last_low = 0, first_high = h.records.size();
    bool saw_low = false, saw_high = false;
    for (const EvaluationRecord& rec : h.records) {
        if (rec.off_budget) continue;
        if (rec.level == 3) {
            last_low = rec.index;
            saw_low = true;
        } else if (rec.level == 1) {
            first_high = std::min(first_high, rec.index);
            saw_high = true;
        }
    }
    REQUIRE(saw_low);
    REQUIRE(saw_high);
    CHECK(last_low < first_high);

    // Sweep size: floor(budget * fraction / cheapest cost) points.
    std::size_t low_count = 0;
    for (const EvaluationRecord& rec : h.records)
        if (rec.level == 3) ++low_count;
    CHECK(low_count == 12800); // floor(200 * 0.25 / 3.90625e-3)
}

TEST_CASE("screening spends less at the highest fidelity than random search",
          "[solvers]") {
    const RunHistory screen = run_to_history("mf_screening", 9, "MF3.1");
    const RunHistory random = run_to_history("random_search", 9, "MF3.1");
    CHECK(level_cost(screen, 1) < level_cost(random, 1));
    CHECK(level_cost(random, 1) == 200.0);
}

TEST_CASE("screening respects tight budgets", "[solvers]") {
    // With a huge screen fraction the sweep itself hits the budget wall; the
    // solver must stop cleanly at the refusal.
    const RunHistory h =
        run_to_history("mf_screening", 2, "MF5.1", {{"screen_fraction", 0.99}});
    CHECK(h.spent <= h.budget);
}

// ---------------------------------------------------------------------------
// Budget compliance across the board
// ---------------------------------------------------------------------------

TEST_CASE("every baseline finishes inside the budget on every cheap instance",
          "[solvers]") {
    for (const std::string& id :
         {std::string("MF1.1"), std::string("MF1.2"), std::string("MF4.1"),
          std::string("MF6")}) {
        for (const std::string& solver : solver_names()) {
            for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
                const RunHistory h = run_to_history(solver, seed, id);
                INFO("solver " << solver << " on " << id << " seed " << seed);
                CHECK(h.spent <= h.budget + 1e-12);
                REQUIRE(h.incumbent.has_value());
                REQUIRE(h.records.back().off_budget);
                CHECK(h.records.back().cost == 0.0);
            }
        }
    }
}
