#pragma once

// Coupled two-mass, three-spring oscillator: matrix assembly, classical RK4
// time marching (the fidelity knob is the step size), and the exact modal
// solution of the 2x2 system used as an oracle in tests.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mfbench/core.hpp"

namespace mfbench {

struct SpringMassParams {
    double k1 = 1.0, k2 = 1.0, k3 = 1.0;
    double m1 = 1.0, m2 = 1.0;

    void validate() const {
        if (k1 <= 0 || k2 <= 0 || k3 <= 0 || m1 <= 0 || m2 <= 0)
            throw std::invalid_argument("spring constants and masses must be positive");
    }
};

struct SimulationConfig {
    double dt = 0.01;
    double t_end = 6.0;
    std::array<double, 2> x0{1.0, 0.0};
    std::array<double, 2> v0{0.0, 0.0};

    long step_count() const {
        if (dt <= 0) throw std::invalid_argument("dt must be positive");
        const double n = t_end / dt;
        const long steps = std::lround(n);
        if (steps < 1 || std::abs(n - static_cast<double>(steps)) > 1e-9 * n)
            throw std::invalid_argument("t_end must be an integer multiple of dt");
        return steps;
    }
};

struct MassStiffness {
    std::array<double, 2> mass_diag; // M = diag(m1, m2)
    std::array<double, 4> stiffness; // K row-major
};

/// M = diag(m1, m2), K = [[-k1-k2, k2], [k2, -k2-k3]].
inline MassStiffness assemble(const SpringMassParams& p) {
    p.validate();
    return MassStiffness{{p.m1, p.m2},
                         {-p.k1 - p.k2, p.k2, p.k2, -p.k2 - p.k3}};
}

namespace detail {

struct ModalDecomposition {
    std::array<double, 2> omega;              // natural frequencies
    std::array<std::array<double, 2>, 2> vec; // eigenvectors of M^-1 K (columns)
    std::array<double, 2> a;                  // cosine coefficients
    std::array<double, 2> b;                  // sine coefficients
};

// Closed-form eigen decomposition of the 2x2 system matrix A = M^-1 K and the
// modal coefficients fitted to the initial conditions.
inline ModalDecomposition decompose(const SpringMassParams& p, const SimulationConfig& cfg) {
    const MassStiffness mk = assemble(p);
    const double a11 = mk.stiffness[0] / mk.mass_diag[0];
    const double a12 = mk.stiffness[1] / mk.mass_diag[0];
    const double a21 = mk.stiffness[2] / mk.mass_diag[1];
    const double a22 = mk.stiffness[3] / mk.mass_diag[1];

    const double tr = a11 + a22;
    const double det = a11 * a22 - a12 * a21;
    const double disc = tr * tr - 4.0 * det;
    if (disc <= 0.0)
        throw std::domain_error("repeated or complex eigenvalue: modal solution undefined");
    const double root = std::sqrt(disc);
    const std::array<double, 2> lambda{(tr + root) / 2.0, (tr - root) / 2.0};
    if (lambda[0] >= 0.0 || lambda[1] >= 0.0)
        throw std::domain_error("non-negative eigenvalue: system is not oscillatory");

    ModalDecomposition md;
    md.omega = {std::sqrt(-lambda[0]), std::sqrt(-lambda[1])};
    // a12 = k2/m1 > 0, so (a12, lambda - a11) never degenerates.
    for (int i = 0; i < 2; ++i) md.vec[i] = {a12, lambda[i] - a11};

    // Solve [z1 z2] a = x0 and [z1 z2] (b .* omega) = v0 (2x2 Cramer).
    const double z11 = md.vec[0][0], z12 = md.vec[1][0];
    const double z21 = md.vec[0][1], z22 = md.vec[1][1];
    const double den = z11 * z22 - z12 * z21;
    md.a = {(cfg.x0[0] * z22 - z12 * cfg.x0[1]) / den,
            (z11 * cfg.x0[1] - cfg.x0[0] * z21) / den};
    const double bw1 = (cfg.v0[0] * z22 - z12 * cfg.v0[1]) / den;
    const double bw2 = (z11 * cfg.v0[1] - cfg.v0[0] * z21) / den;
    md.b = {bw1 / md.omega[0], bw2 / md.omega[1]};
    return md;
}

} // namespace detail

/// Exact displacement x(t) = sum_i [a_i cos(w_i t) + b_i sin(w_i t)] z_i.
inline std::array<double, 2> analytic_solution(const SpringMassParams& p,
                                               const SimulationConfig& cfg, double t) {
    const detail::ModalDecomposition md = detail::decompose(p, cfg);
    std::array<double, 2> x{0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        const double amp = md.a[i] * std::cos(md.omega[i] * t) + md.b[i] * std::sin(md.omega[i] * t);
        x[0] += amp * md.vec[i][0];
        x[1] += amp * md.vec[i][1];
    }
    return x;
}

/// Classical fixed-step RK4 on the first-order state (x1, x2, v1, v2);
/// returns the first-mass position at t_end.
inline double rk4_first_mass(const SpringMassParams& p, const SimulationConfig& cfg) {
    const MassStiffness mk = assemble(p);
    const long steps = cfg.step_count();
    const double dt = cfg.dt;

    using State = std::array<double, 4>;
    const auto deriv = [&mk](const State& u) {
        return State{u[2], u[3],
                     (mk.stiffness[0] * u[0] + mk.stiffness[1] * u[1]) / mk.mass_diag[0],
                     (mk.stiffness[2] * u[0] + mk.stiffness[3] * u[1]) / mk.mass_diag[1]};
    };

    State u{cfg.x0[0], cfg.x0[1], cfg.v0[0], cfg.v0[1]};
    for (long n = 0; n < steps; ++n) {
        const State s1 = deriv(u);
        State tmp;
        for (int i = 0; i < 4; ++i) tmp[i] = u[i] + 0.5 * dt * s1[i];
        const State s2 = deriv(tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = u[i] + 0.5 * dt * s2[i];
        const State s3 = deriv(tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = u[i] + dt * s3[i];
        const State s4 = deriv(tmp);
        for (int i = 0; i < 4; ++i)
            u[i] += dt / 6.0 * (s1[i] + 2.0 * s2[i] + 2.0 * s3[i] + s4[i]);
    }
    return u[0];
}

/// The two spring-mass benchmark variants, distinguished by which parameters
/// are free design variables.
enum class SpringMassVariant {
    SpringsOnly,      // x = (k1, k2), k3 = k1, m1 = m2 = 1
    SpringsAndMasses, // x = (k1, k2, m1, m2), k3 = k1
};

inline SpringMassParams spring_mass_params_from(const DesignPoint& x, SpringMassVariant variant) {
    if (variant == SpringMassVariant::SpringsOnly) {
        if (x.size() != 2) throw std::invalid_argument("springs-only variant expects 2 variables");
        return SpringMassParams{x[0], x[1], x[0], 1.0, 1.0};
    }
    if (x.size() != 4) throw std::invalid_argument("springs-and-masses variant expects 4 variables");
    return SpringMassParams{x[0], x[1], x[0], x[2], x[3]};
}

/// Objective evaluation: first-mass position at t = 6, integrated with
/// dt = 0.01 (level 1) or dt = 0.6 (level 2).
inline double mf5_eval(int level, const DesignPoint& x, SpringMassVariant variant) {
    if (level < 1 || level > 2)
        throw std::invalid_argument("spring-mass fidelity level outside 1..2");
    const SpringMassParams params = spring_mass_params_from(x, variant);
    Bounds::uniform(x.size(), 1.0, 4.0).require_inside(x);
    SimulationConfig cfg;
    cfg.dt = (level == 1) ? 0.01 : 0.6;
    return rk4_first_mass(params, cfg);
}

} // namespace mfbench
