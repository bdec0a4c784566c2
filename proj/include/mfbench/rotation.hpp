#pragma once

// Orthogonal rotation used by the shifted-rotated Rastrigin family. In 2-D
// this is the plain rotation matrix; higher dimensions compose plane (Givens)
// rotations by the same angle in the planes (1,2), (2,3), ..., (D-1,D), in
// that order, which keeps the matrix orthogonal with determinant one.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mfbench/core.hpp"

namespace mfbench {

/// A D x D rotation matrix (row-major) together with its defining angle.
struct RotationSpec {
    double angle = 0.0;
    int dimension = 0;
    std::vector<double> matrix; // row-major, dimension * dimension

    double at(int row, int col) const {
        return matrix[static_cast<std::size_t>(row) * dimension + col];
    }

    /// y = R * v
    std::vector<double> apply(const std::vector<double>& v) const {
        if (static_cast<int>(v.size()) != dimension)
            throw std::invalid_argument("rotation/vector dimension mismatch");
        std::vector<double> y(v.size(), 0.0);
        for (int i = 0; i < dimension; ++i) {
            double acc = 0.0;
            for (int j = 0; j < dimension; ++j) acc += at(i, j) * v[j];
            y[static_cast<std::size_t>(i)] = acc;
        }
        return y;
    }

    /// y = R^T * v (inverse rotation)
    std::vector<double> apply_transposed(const std::vector<double>& v) const {
        if (static_cast<int>(v.size()) != dimension)
            throw std::invalid_argument("rotation/vector dimension mismatch");
        std::vector<double> y(v.size(), 0.0);
        for (int j = 0; j < dimension; ++j) {
            double acc = 0.0;
            for (int i = 0; i < dimension; ++i) acc += at(i, j) * v[i];
            y[static_cast<std::size_t>(j)] = acc;
        }
        return y;
    }
};

inline RotationSpec build_rotation(double theta, int dim) {
    if (dim < 2) throw std::invalid_argument("rotation needs dimension >= 2");

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::size_t n = static_cast<std::size_t>(dim);

    std::vector<double> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) r[i * n + i] = 1.0;

    // Left-multiply by the Givens rotation in plane (p, p+1); only rows p
    // and p+1 change.
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = r[p * n + j];
            const double b = r[(p + 1) * n + j];
            r[p * n + j] = c * a - s * b;
            r[(p + 1) * n + j] = s * a + c * b;
        }
    }
    return RotationSpec{theta, dim, std::move(r)};
}

} // namespace mfbench
