#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smoothstop/observation.hpp"
#include "smoothstop/signals.hpp"
#include "smoothstop/spectrum.hpp"

namespace smoothstop {

/// Truncated SVD estimate mu_hat^(t).
struct Estimate {
    std::vector<double> coefficients;
    double truncation = 0.0;
    /// Bernoulli outcome xi_t deciding whether coefficient ceil(t) is kept;
    /// empty for integer t.
    std::optional<bool> randomization;
};

/// mu_hat_i = 1{i <= m} Y_i / lambda_i.
Estimate truncated_estimate(const Observation& obs, const Spectrum& s, std::size_t m);

/// Randomized cut-off between floor(t) and ceil(t): xi_t ~ Bernoulli(t - floor t),
/// drawn as CounterStream(rand_seed).uniform(0) < t - floor t.
Estimate continuous_estimate(const Observation& obs, const Spectrum& s, double t,
                             std::uint64_t rand_seed);
/// Same, with the Bernoulli outcome supplied by the caller.
Estimate continuous_estimate(const Observation& obs, const Spectrum& s, double t, bool xi);

double squared_loss(const Estimate& est, const Signal& mu);

/// Exact risk E||mu_hat^(t) - mu||^2 = B^2_t(mu) + V_t.
double risk(const Spectrum& s, const Signal& mu, double delta, double t);

/// S_t = sum_{i <= floor t} lambda_i^-2 delta^2 eps_i^2 + frac(t) lambda_ceil^-2 delta^2 eps_ceil^2.
double stochastic_error(std::span<const double> eps, const Spectrum& s, double delta, double t);
/// Uses the retained noise of obs; throws std::invalid_argument if it was dropped.
double stochastic_error(const Observation& obs, const Spectrum& s, double t);

}  // namespace smoothstop
