#pragma once

// Deterministic design-of-experiment helpers: full-factorial grids, seeded
// Latin hypercube samples, and box corners. Everything here is reproducible
// across platforms: seeds derive from a fixed FNV-1a hash rather than
// std::hash, and the shuffles use std::mt19937_64 directly.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfbench/core.hpp"

namespace mfbench {

/// Portable 64-bit FNV-1a; used to turn benchmark IDs into stable seeds.
inline std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Full factorial grid with `points_per_axis` levels along each axis,
/// endpoints included. Size grows as points_per_axis^D, so callers keep D
/// small (<= 3 here).
inline std::vector<DesignPoint> full_factorial_grid(const Bounds& bounds,
                                                    int points_per_axis) {
    if (points_per_axis < 2)
        throw std::invalid_argument("full_factorial_grid: need at least 2 points per axis");
    const std::size_t d = bounds.dimension();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > 100'000'000 / static_cast<std::size_t>(points_per_axis))
            throw std::invalid_argument("full_factorial_grid: grid too large");
        total *= static_cast<std::size_t>(points_per_axis);
    }

    std::vector<DesignPoint> grid;
    grid.reserve(total);
    std::vector<int> idx(d, 0);
    for (std::size_t n = 0; n < total; ++n) {
        DesignPoint p(d);
        for (std::size_t i = 0; i < d; ++i) {
            const double t = static_cast<double>(idx[i]) / (points_per_axis - 1);
            p[i] = bounds.lower[i] + t * (bounds.upper[i] - bounds.lower[i]);
        }
        grid.push_back(std::move(p));
        // Odometer increment, first axis fastest.
        for (std::size_t i = 0; i < d; ++i) {
            if (++idx[i] < points_per_axis) break;
            idx[i] = 0;
        }
    }
    return grid;
}

/// Stratified Latin hypercube: each axis is split into `count` equal strata,
/// one point per stratum at a uniform offset, with independently shuffled
/// stratum orders per axis.
inline std::vector<DesignPoint> latin_hypercube(const Bounds& bounds, std::size_t count,
                                                std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("latin_hypercube: count must be positive");
    const std::size_t d = bounds.dimension();
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<DesignPoint> points(count, DesignPoint(d));
    std::vector<std::size_t> order(count);
    for (std::size_t axis = 0; axis < d; ++axis) {
        for (std::size_t i = 0; i < count; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), engine);
        for (std::size_t i = 0; i < count; ++i) {
            const double u = (static_cast<double>(order[i]) + unit(engine)) /
                             static_cast<double>(count);
            points[i][axis] = bounds.lower[axis] + u * (bounds.upper[axis] - bounds.lower[axis]);
        }
    }
    return points;
}

/// All 2^D vertices of the box. Used to augment space-filling samples when
/// extremes matter (range scans in higher dimensions).
inline std::vector<DesignPoint> corner_points(const Bounds& bounds) {
    const std::size_t d = bounds.dimension();
    if (d > 20) throw std::invalid_argument("corner_points: dimension too large");
    const std::size_t total = std::size_t{1} << d;
    std::vector<DesignPoint> corners;
    corners.reserve(total);
    for (std::size_t mask = 0; mask < total; ++mask) {
        DesignPoint p(d);
        for (std::size_t i = 0; i < d; ++i)
            p[i] = (mask >> i) & 1 ? bounds.upper[i] : bounds.lower[i];
        corners.push_back(std::move(p));
    }
    return corners;
}

} // namespace mfbench
