#pragma once

// Shared domain types for the multifidelity benchmark harness: box bounds,
// design points, the linear design-space scaling, budget accounting, and the
// per-instance benchmark descriptors.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfbench {

/// A design point in the (unscaled) box domain of a benchmark.
using DesignPoint = std::vector<double>;

/// Absolute slack applied to closed-interval domain checks, so points that
/// came through unscale() round-off are not rejected.
inline constexpr double kDomainTolerance = 1e-12;

/// Closed box domain: lower[k] <= x[k] <= upper[k].
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> lo, std::vector<double> hi)
        : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.empty() || lower.size() != upper.size())
            throw std::invalid_argument("Bounds: lower/upper must be non-empty and equal length");
        for (std::size_t k = 0; k < lower.size(); ++k)
            if (!(lower[k] < upper[k]))
                throw std::invalid_argument("Bounds: lower[" + std::to_string(k) +
                                            "] must be < upper[" + std::to_string(k) + "]");
    }

    /// Uniform box [lo, hi]^dim.
    static Bounds uniform(std::size_t dim, double lo, double hi) {
        return Bounds(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
    }

    std::size_t dimension() const { return lower.size(); }

    bool contains(const DesignPoint& x, double tol = kDomainTolerance) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k] < lower[k] - tol || x[k] > upper[k] + tol) return false;
        return true;
    }

    /// Throws std::domain_error naming the first offending component.
    void require_inside(const DesignPoint& x, double tol = kDomainTolerance) const {
        if (x.size() != lower.size())
            throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                        ", bounds have dimension " + std::to_string(lower.size()));
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k] < lower[k] - tol || x[k] > upper[k] + tol)
                throw std::domain_error("component " + std::to_string(k + 1) + " = " +
                                        std::to_string(x[k]) + " outside [" +
                                        std::to_string(lower[k]) + ", " +
                                        std::to_string(upper[k]) + "]");
    }
};

/// Linear map of x onto the unit hypercube: u_k = (x_k - l_k) / (u_k - l_k).
inline DesignPoint scale_to_unit(const DesignPoint& x, const Bounds& b) {
    b.require_inside(x);
    DesignPoint u(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        u[k] = (x[k] - b.lower[k]) / (b.upper[k] - b.lower[k]);
    return u;
}

/// Inverse of scale_to_unit.
inline DesignPoint unscale(const DesignPoint& u, const Bounds& b) {
    if (u.size() != b.dimension())
        throw std::invalid_argument("point/bounds dimension mismatch");
    DesignPoint x(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] < -kDomainTolerance || u[k] > 1.0 + kDomainTolerance)
            throw std::domain_error("component " + std::to_string(k + 1) + " = " +
                                    std::to_string(u[k]) + " outside [0, 1]");
        x[k] = b.lower[k] + u[k] * (b.upper[k] - b.lower[k]);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Budget accounting
// ---------------------------------------------------------------------------

/// Tracks budget in exact fixed-point units of 1e-8 equivalent high-fidelity
/// evaluations, so fractional fidelity costs sum without floating drift
/// (e.g. 50 x 1.0 + 1000 x 0.05 consumes a budget of 100 exactly). All
/// tabulated costs and budgets are exact multiples of the quantum.
class BudgetLedger {
  public:
    static constexpr double kQuantum = 1e-8;

    explicit BudgetLedger(double total) : total_units_(to_units(total)) {
        if (total_units_ <= 0) throw std::invalid_argument("budget must be positive");
    }

    /// Charges `cost` if it fits. Returns false (and leaves the ledger
    /// untouched) when the charge would exceed the total.
    [[nodiscard]] bool try_charge(double cost) {
        const std::int64_t units = to_units(cost);
        if (units <= 0) throw std::invalid_argument("cost must be positive");
        if (spent_units_ + units > total_units_) return false;
        spent_units_ += units;
        return true;
    }

    double total() const { return static_cast<double>(total_units_) * kQuantum; }
    double spent() const { return static_cast<double>(spent_units_) * kQuantum; }
    double remaining() const { return static_cast<double>(total_units_ - spent_units_) * kQuantum; }

  private:
    static std::int64_t to_units(double value) {
        if (!std::isfinite(value)) throw std::invalid_argument("non-finite amount");
        return std::llround(value / kQuantum);
    }

    std::int64_t total_units_ = 0;
    std::int64_t spent_units_ = 0;
};

// ---------------------------------------------------------------------------
// Benchmark descriptors
// ---------------------------------------------------------------------------

/// How the optimum of a benchmark is described.
enum class OptimumKind {
    Point,                 ///< single optimal design point
    FirstCoordinateZero,   ///< every x with x_1 = 0 is optimal
    CoordinateProductLevel ///< every x with x_1 * x_2 equal to one of the levels
};

/// The set of optimal design points; a single point or a simple manifold.
struct OptimumSet {
    OptimumKind kind = OptimumKind::Point;
    DesignPoint point;                  // used when kind == Point
    std::vector<double> product_levels; // used when kind == CoordinateProductLevel

    static OptimumSet at(DesignPoint p) { return {OptimumKind::Point, std::move(p), {}}; }
    static OptimumSet first_coordinate_zero() { return {OptimumKind::FirstCoordinateZero, {}, {}}; }
    static OptimumSet product_levels_of(std::vector<double> levels) {
        return {OptimumKind::CoordinateProductLevel, {}, std::move(levels)};
    }
};

/// Reference optimum and normalization constants for the goal metrics.
struct ReferenceValues {
    OptimumSet optimum;
    double f_star = 0.0; ///< objective value at the optimum
    double f_min = 0.0;  ///< domain-wide minimum used for normalization
    double f_max = 0.0;  ///< domain-wide maximum used for normalization
};

/// Immutable description of one benchmark instance.
struct BenchmarkSpec {
    std::string id;     ///< e.g. "MF2.2"
    std::string family; ///< display name, e.g. "Rosenbrock"
    int dimension = 0;
    Bounds bounds;
    std::vector<double> fidelity_costs; ///< lambda_1..lambda_L, lambda_1 = 1, strictly decreasing
    double budget = 0.0;                ///< in equivalent high-fidelity evaluations
    ReferenceValues reference;

    int levels() const { return static_cast<int>(fidelity_costs.size()); }

    double cost_of_level(int level) const {
        if (level < 1 || level > levels())
            throw std::invalid_argument(id + ": fidelity level " + std::to_string(level) +
                                        " outside 1.." + std::to_string(levels()));
        return fidelity_costs[static_cast<std::size_t>(level - 1)];
    }
};

} // namespace mfbench
