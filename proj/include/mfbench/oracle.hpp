#pragma once

// The budget-limited evaluation oracle. A run wraps one benchmark instance
// with a cost ledger: every query charges the level's cost before returning
// a value, a query that would overdraw the budget is refused, and the first
// refusal is terminal for the run. The full evaluation history is kept for
// reporting and metric computation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfbench/benchmarks.hpp"
#include "mfbench/core.hpp"
#include "mfbench/noise.hpp"

namespace mfbench {

/// One charged evaluation (or the final free instrumentation entry).
struct EvaluationRecord {
    std::size_t index = 0;      ///< 0-based position in the run history
    int level = 1;
    DesignPoint point;
    double value = 0.0;
    double cost = 0.0;          ///< charged cost; 0 for off-budget entries
    double cumulative_cost = 0.0;
    bool off_budget = false;
};

/// Best level-1 value seen so far, tagged with the spend at which it appeared.
struct BestSoFar {
    double cumulative_cost = 0.0;
    DesignPoint point;
    double value = 0.0;
};

/// Complete record of one solver run against one benchmark instance.
struct RunHistory {
    std::string benchmark_id;
    std::uint64_t seed = 0;
    double budget = 0.0;
    double spent = 0.0;
    std::vector<EvaluationRecord> records;
    std::vector<BestSoFar> best_trace;       ///< monotone non-increasing in value
    std::optional<BestSoFar> incumbent;      ///< last entry of best_trace
};

class OracleRun {
public:
    OracleRun(const Benchmark& benchmark, std::uint64_t seed)
        : benchmark_(&benchmark), ledger_(benchmark.spec.budget) {
        history_.benchmark_id = benchmark.spec.id;
        history_.seed = seed;
        history_.budget = benchmark.spec.budget;
        if (benchmark.is_noisy()) noise_.emplace(derive_seed(seed, 0));
    }

    const BenchmarkSpec& spec() const { return benchmark_->spec; }

    double budget() const { return ledger_.total(); }
    double spent() const { return ledger_.spent(); }
    double remaining() const { return ledger_.remaining(); }
    bool exhausted() const { return refused_; }
    std::size_t evaluation_count() const { return history_.records.size(); }
    const std::optional<BestSoFar>& incumbent() const { return history_.incumbent; }

    /// Charges the level's cost and evaluates. Returns nullopt when the
    /// charge would overdraw the budget; after the first refusal every
    /// further query is refused as well. Domain and level violations throw
    /// without charging.
    std::optional<double> query(int level, const DesignPoint& x) {
        if (finalized_)
            throw std::logic_error("oracle: query after finalize");
        const double cost = benchmark_->spec.cost_of_level(level);
        benchmark_->spec.bounds.require_inside(x);

        if (refused_ || !ledger_.try_charge(cost)) {
            refused_ = true;
            if (++refusals_after_exhaustion_ > kRefusalCap)
                throw std::logic_error(
                    "oracle: more than " + std::to_string(kRefusalCap) +
                    " queries after budget exhaustion; solver is not terminating");
            return std::nullopt;
        }

        NoiseStream* stream = noise_ ? &*noise_ : nullptr;
        const double value = benchmark_->eval(level, x, stream);

        EvaluationRecord rec;
        rec.index = history_.records.size();
        rec.level = level;
        rec.point = x;
        rec.value = value;
        rec.cost = cost;
        rec.cumulative_cost = ledger_.spent();
        history_.records.push_back(rec);
        history_.spent = ledger_.spent();

        if (level == 1) update_best(rec);
        return value;
    }

    /// Appends a free instrumentation record: the noise-free highest-fidelity
    /// value at `x`. Does not touch the budget or the best trace.
    double append_off_budget_record(const DesignPoint& x) {
        if (finalized_)
            throw std::logic_error("oracle: append_off_budget_record after finalize");
        benchmark_->spec.bounds.require_inside(x);
        const double value = benchmark_->eval(1, x, nullptr);

        EvaluationRecord rec;
        rec.index = history_.records.size();
        rec.level = 1;
        rec.point = x;
        rec.value = value;
        rec.cost = 0.0;
        rec.cumulative_cost = ledger_.spent();
        rec.off_budget = true;
        history_.records.push_back(rec);
        return value;
    }

    /// Hands the accumulated history to the caller and closes the run.
    RunHistory finalize() {
        if (finalized_) throw std::logic_error("oracle: finalize called twice");
        finalized_ = true;
        return std::move(history_);
    }

private:
    static constexpr std::size_t kRefusalCap = 10'000;

    void update_best(const EvaluationRecord& rec) {
        if (!history_.incumbent || rec.value < history_.incumbent->value) {
            BestSoFar best{rec.cumulative_cost, rec.point, rec.value};
            history_.best_trace.push_back(best);
            history_.incumbent = std::move(best);
        }
    }

    const Benchmark* benchmark_;
    BudgetLedger ledger_;
    std::optional<NoiseStream> noise_;
    RunHistory history_;
    bool refused_ = false;
    bool finalized_ = false;
    std::size_t refusals_after_exhaustion_ = 0;
};

} // namespace mfbench
