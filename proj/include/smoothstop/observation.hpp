#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "smoothstop/signals.hpp"
#include "smoothstop/spectrum.hpp"

namespace smoothstop {

/// Realization of Y_i = lambda_i mu_i + delta eps_i.
struct Observation {
    std::vector<double> y;
    double delta = 0.0;
    /// Generator seed, or nullopt when the noise was injected by the caller.
    std::optional<std::uint64_t> seed;
    /// The eps_i that produced y, when retained.
    std::optional<std::vector<double>> noise;

    [[nodiscard]] std::size_t dimension() const { return y.size(); }
};

/// eps_i = CounterStream(seed).normal(i - 1), i = 1..D. delta == 0 is
/// accepted as the noiseless degenerate case; delta < 0 throws.
Observation simulate(const Spectrum& s, const Signal& mu, double delta, std::uint64_t seed,
                     bool retain_noise = true);

/// Y_i = lambda_i mu_i + delta eps_i for caller-provided eps.
Observation inject_noise(const Spectrum& s, const Signal& mu, double delta,
                         std::span<const double> eps);

/// Writes `index,y`.
void save_observation(const Observation& obs, const std::filesystem::path& path);

}  // namespace smoothstop
