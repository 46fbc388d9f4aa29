#pragma once

#include <cstddef>

#include "smoothstop/signals.hpp"
#include "smoothstop/spectrum.hpp"
#include "smoothstop/stopping.hpp"

namespace smoothstop {

struct ClassicalOracle {
    std::size_t index = 0;  // t^c, smallest minimizer
    double risk = 0.0;      // min_t E||mu_hat^(t) - mu||^2
};

/// Deterministic oracle indices for one (spectrum, signal, delta, alpha, kappa).
struct OracleReport {
    ClassicalOracle classical;
    double balanced = 0.0;                // t^b
    double alpha_balanced = 0.0;          // t^b_alpha
    double proxy = 0.0;                   // t*_alpha
    std::size_t discrete_balanced = 0;    // m^b
};

/// Integer minimizer of the exact risk over t in [0, D]; ties go to the smallest index.
ClassicalOracle classical_oracle(const Spectrum& s, const Signal& mu, double delta);

/// t^b = inf{t : B^2_t <= V_t}, solved exactly on the crossing interval.
double balanced_oracle(const Spectrum& s, const Signal& mu, double delta);

/// t^b_alpha = inf{t : B^2_{t,alpha} <= V_{t,alpha}}.
double alpha_balanced_oracle(const Spectrum& s, const Signal& mu, double delta, double alpha);

/// t*_alpha = inf{t : E R^2_{t,alpha} <= kappa}.
double oracle_proxy(const Spectrum& s, const Signal& mu, double delta, const StoppingConfig& cfg);

/// E R^2_{t,alpha} = B^2_{t,alpha} + sum lambda^(2 alpha) delta^2 - V_{t,alpha}.
double expected_residual(const Spectrum& s, const Signal& mu, double delta, double alpha, double t);

/// m^b = inf{m integer : B^2_m <= V_m}.
std::size_t discrete_balanced_index(const Spectrum& s, const Signal& mu, double delta);

OracleReport oracle_report(const Spectrum& s, const Signal& mu, double delta,
                           const StoppingConfig& cfg);

/// t^mm = (r^2 delta^-2)^(1/(2 beta + 2p + 1)).
double minimax_index(double beta, double p, double r, double delta);

/// Smoothed minimax truncation index; three regimes in alpha p relative to 1/2.
/// At alpha p == 1/2 requires r^2 delta^-2 > 1.
double alpha_minimax_index(double beta, double p, double r, double delta, double alpha);

/// R* = r^2 (r^-2 delta^2)^(2 beta / (2 beta + 2p + 1)).
double minimax_rate(double beta, double p, double r, double delta);

/// Rate of the alpha-balanced lower bound; equals minimax_rate at alpha = 0.
double smoothing_rate(double beta, double p, double r, double delta, double alpha);

/// alpha p compared against a boundary value with a relative tolerance of 1e-12.
enum class Regime { Below, At, Above };
Regime classify_alpha_p(double alpha, double p, double boundary);

}  // namespace smoothstop
