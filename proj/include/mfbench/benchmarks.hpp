#pragma once

// The analytical benchmark families at every fidelity level, and the registry
// of the fourteen instances with their dimensions, budgets, fidelity costs and
// reference optima.
//
// Level 1 is always the highest fidelity. Domain checks use closed intervals
// with a 1e-12 absolute slack. All evaluators are pure; the noisy family
// draws from a caller-supplied stream, or none when the stream is null
// (noise-free mode, used for metric instrumentation).

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfbench/core.hpp"
#include "mfbench/noise.hpp"
#include "mfbench/rotation.hpp"
#include "mfbench/spring_mass.hpp"

namespace mfbench {

namespace detail {

inline void require_level(int level, int max_level, const char* family) {
    if (level < 1 || level > max_level)
        throw std::invalid_argument(std::string(family) + ": fidelity level " +
                                    std::to_string(level) + " outside 1.." +
                                    std::to_string(max_level));
}

} // namespace detail

// ---------------------------------------------------------------------------
// MF1: one-dimensional four-level benchmark on [0, 1]
// ---------------------------------------------------------------------------

inline double forrester(int level, double x) {
    detail::require_level(level, 4, "forrester");
    if (x < -kDomainTolerance || x > 1.0 + kDomainTolerance)
        throw std::domain_error("forrester: x outside [0, 1]");
    const double f1 = (6.0 * x - 2.0) * (6.0 * x - 2.0) * std::sin(12.0 * x - 4.0);
    switch (level) {
        case 1: return f1;
        case 2: return (5.5 * x - 2.5) * (5.5 * x - 2.5) * std::sin(12.0 * x - 4.0);
        case 3: return 0.75 * f1 + 5.0 * (x - 0.5) - 2.0;
        default: return 0.5 * f1 + 10.0 * (x - 0.5) - 5.0;
    }
}

// ---------------------------------------------------------------------------
// MF1.2: discontinuous variant, two levels; x = 0.5 belongs to the first
// branch at both levels, exactly as the defining inequalities read.
// ---------------------------------------------------------------------------

inline double forrester_jump(int level, double x) {
    detail::require_level(level, 2, "forrester_jump");
    if (x < -kDomainTolerance || x > 1.0 + kDomainTolerance)
        throw std::domain_error("forrester_jump: x outside [0, 1]");
    const double base = (6.0 * x - 2.0) * (6.0 * x - 2.0) * std::sin(12.0 * x - 4.0);
    const bool first_branch = x <= 0.5;
    const double f1 = first_branch ? base : base + 10.0;
    if (level == 1) return f1;
    return 0.5 * f1 + 10.0 * (x - 0.5) + (first_branch ? -5.0 : -2.0);
}

// ---------------------------------------------------------------------------
// MF2: Rosenbrock, three levels on [-2, 2]^D
// ---------------------------------------------------------------------------

inline double rosenbrock(int level, const DesignPoint& x) {
    detail::require_level(level, 3, "rosenbrock");
    if (x.size() < 2) throw std::invalid_argument("rosenbrock: needs dimension >= 2");
    Bounds::uniform(x.size(), -2.0, 2.0).require_inside(x);

    const std::size_t d = x.size();
    if (level == 1) {
        double f = 0.0;
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = 1.0 - x[i];
            f += 100.0 * a * a + b * b;
        }
        return f;
    }
    if (level == 2) {
        double f = 0.0;
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = -2.0 - x[i];
            f += 50.0 * a * a + b * b;
        }
        for (double xi : x) f -= 0.5 * xi;
        return f;
    }
    // Lowest level: a scaled and shifted transform of level 1. The linear
    // sums run over all D components.
    double half_sum = 0.0, quarter_sum = 0.0;
    for (double xi : x) {
        half_sum += 0.5 * xi;
        quarter_sum += 0.25 * xi;
    }
    return (rosenbrock(1, x) - 4.0 - half_sum) / (10.0 + quarter_sum);
}

// ---------------------------------------------------------------------------
// MF3: shifted-rotated Rastrigin, three levels on [-0.1, 0.2]^D
// ---------------------------------------------------------------------------

inline constexpr double kRastriginShift = 0.1;
inline constexpr double kRastriginAngle = 0.2;
inline constexpr double kRastriginPhi[3] = {10000.0, 5000.0, 2500.0};

/// Fidelity-parameterized additive perturbation; vanishes at phi = 10000.
inline double rastrigin_resolution_error(const std::vector<double>& z, double phi) {
    const double theta = 1.0 - 0.0001 * phi;
    const double a = theta;
    const double w = 10.0 * std::numbers::pi * theta;
    const double b = 0.5 * std::numbers::pi * theta;
    double e = 0.0;
    for (double zi : z) {
        const double c = std::cos(w * zi + b + std::numbers::pi);
        e += a * c * c;
    }
    return e;
}

/// Rastrigin core in rotated-shifted coordinates.
inline double rastrigin_core(const std::vector<double>& z) {
    double f = 0.0;
    for (double zi : z) f += zi * zi + 1.0 - std::cos(10.0 * std::numbers::pi * zi);
    return f;
}

inline double shifted_rotated_rastrigin(int level, const DesignPoint& x,
                                        const RotationSpec& rotation) {
    detail::require_level(level, 3, "rastrigin");
    if (static_cast<int>(x.size()) != rotation.dimension)
        throw std::invalid_argument("rastrigin: point/rotation dimension mismatch");
    Bounds::uniform(x.size(), -0.1, 0.2).require_inside(x);

    std::vector<double> shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - kRastriginShift;
    const std::vector<double> z = rotation.apply(shifted);
    return rastrigin_core(z) + rastrigin_resolution_error(z, kRastriginPhi[level - 1]);
}

inline double shifted_rotated_rastrigin(int level, const DesignPoint& x) {
    static const std::map<int, RotationSpec> rotations = [] {
        std::map<int, RotationSpec> m;
        for (int d : {2, 5, 10}) m.emplace(d, build_rotation(kRastriginAngle, d));
        return m;
    }();
    const auto it = rotations.find(static_cast<int>(x.size()));
    if (it == rotations.end())
        return shifted_rotated_rastrigin(level, x, build_rotation(kRastriginAngle,
                                                                  static_cast<int>(x.size())));
    return shifted_rotated_rastrigin(level, x, it->second);
}

// ---------------------------------------------------------------------------
// MF4: heterogeneous functions on the unit hypercube, two levels
// ---------------------------------------------------------------------------

inline double heterogeneous(int level, const DesignPoint& x) {
    detail::require_level(level, 2, "heterogeneous");
    if (x.empty()) throw std::invalid_argument("heterogeneous: empty point");
    Bounds::uniform(x.size(), 0.0, 1.0).require_inside(x);

    const std::size_t d = x.size();
    if (d == 1) {
        const double t = x[0] - 0.9;
        const double f1 = std::sin(30.0 * t * t * t * t) * std::cos(2.0 * t) + t / 2.0;
        if (level == 1) return f1;
        return (f1 - 1.0 + x[0]) / (1.0 + 0.25 * x[0]);
    }

    const double t = x[0] - 0.9;
    double f1 = std::sin(21.0 * t * t * t * t) * std::cos(2.0 * t) + (x[0] - 0.7) / 2.0;
    double prod = x[0];
    for (std::size_t i = 2; i <= d; ++i) {
        prod *= x[i - 1];
        f1 += static_cast<double>(i) * std::pow(x[i - 1], static_cast<double>(i)) * std::sin(prod);
    }
    if (level == 1) return f1;

    double num = f1 - 2.0;
    for (double xi : x) num += xi;
    double den = 5.0 + 0.25 * x[0] + 0.5 * x[1];
    for (std::size_t i = 3; i <= d; ++i) den -= 0.25 * static_cast<double>(i) * x[i - 1];
    return num / den;
}

// ---------------------------------------------------------------------------
// MF6: localized multimodal function with additive Gaussian noise, two levels
// on [0.3, 1]^2
// ---------------------------------------------------------------------------

inline const NoiseSpec& paciorek_noise_spec() {
    static const NoiseSpec spec({0.0125, 0.075}, 0.5);
    return spec;
}

/// Deterministic part only.
inline double paciorek_core(int level, const DesignPoint& x) {
    detail::require_level(level, 2, "paciorek");
    if (x.size() != 2) throw std::invalid_argument("paciorek: defined for D = 2 only");
    Bounds::uniform(2, 0.3, 1.0).require_inside(x);

    const double inv = 1.0 / (x[0] * x[1]);
    const double f1 = std::sin(inv);
    if (level == 1) return f1;
    const double amp = paciorek_noise_spec().discrepancy_amplitude;
    return f1 - 9.0 * amp * amp * std::cos(inv);
}

/// Full evaluation; pass a null stream for the noise-free mode.
inline double paciorek(int level, const DesignPoint& x, NoiseStream* noise) {
    const double core = paciorek_core(level, x);
    if (noise == nullptr) return core;
    return core + paciorek_noise_spec().alpha(level) * noise->gaussian();
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Evaluator bound to one benchmark instance. The noise stream argument is
/// ignored by the deterministic families; the noisy family runs noise-free
/// when it is null.
using Evaluator = std::function<double(int level, const DesignPoint& x, NoiseStream* noise)>;

struct Benchmark {
    BenchmarkSpec spec;
    Evaluator eval;

    bool is_noisy() const { return spec.family == "Pacioreck"; }
};

namespace detail {

inline std::map<std::string, Benchmark> build_registry() {
    std::map<std::string, Benchmark> reg;

    const auto add = [&reg](BenchmarkSpec spec, Evaluator eval) {
        const std::string id = spec.id;
        reg.emplace(id, Benchmark{std::move(spec), std::move(eval)});
    };

    // MF1: Forrester, 1-D, budget 100, four levels.
    add(BenchmarkSpec{"MF1.1", "Forrester", 1, Bounds::uniform(1, 0.0, 1.0),
                      {1.0, 0.5, 0.1, 0.05}, 100.0,
                      ReferenceValues{OptimumSet::at({0.75724876}), -6.020740, -6.0207, 15.830}},
        [](int level, const DesignPoint& x, NoiseStream*) {
            if (x.size() != 1) throw std::invalid_argument("MF1.1 is one-dimensional");
            return forrester(level, x[0]);
        });

    add(BenchmarkSpec{"MF1.2", "Jump Forrester", 1, Bounds::uniform(1, 0.0, 1.0),
                      {1.0, 0.2}, 100.0,
                      ReferenceValues{OptimumSet::at({0.1426}), -0.9863, -0.9863, 25.830}},
        [](int level, const DesignPoint& x, NoiseStream*) {
            if (x.size() != 1) throw std::invalid_argument("MF1.2 is one-dimensional");
            return forrester_jump(level, x[0]);
        });

    // MF2: Rosenbrock at D = 2, 5, 10.
    const auto rosen_eval = [](int level, const DesignPoint& x, NoiseStream*) {
        return rosenbrock(level, x);
    };
    for (const auto& [id, dim, budget, fmax] :
         {std::tuple{"MF2.1", 2, 200.0, 3609.0},
          std::tuple{"MF2.2", 5, 500.0, 14436.0},
          std::tuple{"MF2.3", 10, 1000.0, 32481.0}}) {
        add(BenchmarkSpec{id, "Rosenbrock", dim, Bounds::uniform(dim, -2.0, 2.0),
                          {1.0, 0.5, 0.1}, budget,
                          ReferenceValues{OptimumSet::at(DesignPoint(dim, 1.0)), 0.0, 0.0, fmax}},
            rosen_eval);
    }

    // MF3: shifted-rotated Rastrigin at D = 2, 5, 10. Costs follow the
    // quartic decay (1/2^(l-1))^4.
    const auto rastrigin_eval = [](int level, const DesignPoint& x, NoiseStream*) {
        return shifted_rotated_rastrigin(level, x);
    };
    for (const auto& [id, dim, budget, fmax] :
         {std::tuple{"MF3.1", 2, 200.0, 4.0200},
          std::tuple{"MF3.2", 5, 500.0, 10.050},
          std::tuple{"MF3.3", 10, 1000.0, 20.100}}) {
        add(BenchmarkSpec{id, "Shifted-rotated Rastrigin", dim,
                          Bounds::uniform(dim, -0.1, 0.2),
                          {1.0, 6.25e-2, 3.90625e-3}, budget,
                          ReferenceValues{OptimumSet::at(DesignPoint(dim, 0.1)), 0.0, 0.0, fmax}},
            rastrigin_eval);
    }

    // MF4: heterogeneous at D = 1, 2, 3. The optimum for D >= 2 is the
    // whole x_1 = 0 face.
    const auto hetero_eval = [](int level, const DesignPoint& x, NoiseStream*) {
        return heterogeneous(level, x);
    };
    add(BenchmarkSpec{"MF4.1", "Heterogeneous", 1, Bounds::uniform(1, 0.0, 1.0),
                      {1.0, 0.2}, 100.0,
                      ReferenceValues{OptimumSet::at({0.27550}), -0.625, -0.62500, 0.36151}},
        hetero_eval);
    for (const auto& [id, dim, budget, fmax] :
         {std::tuple{"MF4.2", 2, 200.0, 1.8350}, std::tuple{"MF4.3", 3, 300.0, 4.3594}}) {
        add(BenchmarkSpec{id, "Heterogeneous", dim, Bounds::uniform(dim, 0.0, 1.0),
                          {1.0, 0.2}, budget,
                          ReferenceValues{OptimumSet::first_coordinate_zero(), -0.5627123,
                                          -0.56271, fmax}},
            hetero_eval);
    }

    // MF5: spring-mass system; fidelity via RK4 step size, cost ratio
    // 0.01/0.6 as tabulated.
    add(BenchmarkSpec{"MF5.1", "Springs", 2, Bounds::uniform(2, 1.0, 4.0),
                      {1.0, 1.66667e-2}, 200.0,
                      ReferenceValues{OptimumSet::at({2.467401, 2.193245}), -1.0, -1.0, 1.0}},
        [](int level, const DesignPoint& x, NoiseStream*) {
            return mf5_eval(level, x, SpringMassVariant::SpringsOnly);
        });
    add(BenchmarkSpec{"MF5.2", "Springs-masses", 4, Bounds::uniform(4, 1.0, 4.0),
                      {1.0, 1.66667e-2}, 400.0,
                      ReferenceValues{OptimumSet::at({1.000000, 3.946018, 4.000000, 3.286277}),
                                      -1.0, -1.0, 1.0}},
        [](int level, const DesignPoint& x, NoiseStream*) {
            return mf5_eval(level, x, SpringMassVariant::SpringsAndMasses);
        });

    // MF6: noisy Paciorek; the optimal set is the pair of hyperbola arcs
    // x1*x2 = 2/((3+j)pi), j = 0 and 4, that cross the domain.
    add(BenchmarkSpec{"MF6", "Pacioreck", 2, Bounds::uniform(2, 0.3, 1.0),
                      {1.0, 0.2}, 200.0,
                      ReferenceValues{OptimumSet::product_levels_of(
                                          {2.0 / (3.0 * std::numbers::pi),
                                           2.0 / (7.0 * std::numbers::pi)}),
                                      -1.0, -1.0, 1.0}},
        [](int level, const DesignPoint& x, NoiseStream* noise) {
            return paciorek(level, x, noise);
        });

    return reg;
}

} // namespace detail

inline const std::map<std::string, Benchmark>& benchmark_registry() {
    static const std::map<std::string, Benchmark> reg = detail::build_registry();
    return reg;
}

/// All instance IDs in display order.
inline std::vector<std::string> benchmark_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, bench] : benchmark_registry()) ids.push_back(id);
    return ids;
}

/// Looks up one instance; throws std::out_of_range listing the valid IDs.
inline const Benchmark& get_benchmark(const std::string& id) {
    const auto& reg = benchmark_registry();
    const auto it = reg.find(id);
    if (it == reg.end()) {
        std::string valid;
        for (const auto& [key, bench] : reg) {
            if (!valid.empty()) valid += ", ";
            valid += key;
        }
        throw std::out_of_range("unknown benchmark '" + id + "'; valid ids: " + valid);
    }
    return it->second;
}

} // namespace mfbench
