#pragma once

// Seeded Gaussian noise stream for the noisy benchmark family. The stream is
// owned by the caller (one per run), never by a benchmark, so evaluations are
// pure functions of (inputs, stream state) and replays are reproducible.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace mfbench {

/// Deterministic stream of standard-normal draws. Each draw consumes exactly
/// two engine outputs (basic Box-Muller, cosine half only), so the mapping
/// from draw index to value is fixed for a given seed regardless of platform
/// library details.
class NoiseStream {
  public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    /// One N(0,1) sample.
    double gaussian() {
        const double u1 = to_open_unit(engine_());
        const double u2 = to_open_unit(engine_());
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    // Maps a 64-bit word into (0,1): top 53 bits plus a half-step offset.
    static double to_open_unit(std::uint64_t word) {
        return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
};

/// Per-level noise standard deviations plus the inter-fidelity discrepancy
/// amplitude of the noisy family.
struct NoiseSpec {
    std::vector<double> alpha_per_level;
    double discrepancy_amplitude = 0.0;

    NoiseSpec(std::vector<double> alphas, double amplitude)
        : alpha_per_level(std::move(alphas)), discrepancy_amplitude(amplitude) {
        for (double a : alpha_per_level)
            if (a < 0.0) throw std::invalid_argument("noise level must be non-negative");
        if (discrepancy_amplitude < 0.0 || discrepancy_amplitude > 1.0)
            throw std::invalid_argument("discrepancy amplitude must be in [0, 1]");
    }

    double alpha(int level) const {
        if (level < 1 || level > static_cast<int>(alpha_per_level.size()))
            throw std::invalid_argument("no noise level " + std::to_string(level));
        return alpha_per_level[static_cast<std::size_t>(level - 1)];
    }
};

/// Derives independent sub-seeds from a run seed (splitmix64 steps), so the
/// solver RNG and the oracle noise stream never share state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t z = seed + (stream_index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace mfbench
