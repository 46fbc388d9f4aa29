#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothstop/spectrum.hpp"

namespace smoothstop {

/// Coefficients mu_i of the unknown signal in the singular basis.
/// Carries no spectrum; pairing is checked at call sites.
struct Signal {
    std::vector<double> coefficients;
    std::string label;
    std::optional<std::uint64_t> seed;

    [[nodiscard]] std::size_t dimension() const { return coefficients.size(); }
};

/// Sobolev-type ellipsoid sum_i i^(2 beta) mu_i^2 <= r^2 in dimension D.
struct SobolevBall {
    double beta = 0.0;
    double radius = 1.0;
    std::size_t dimension = 0;

    [[nodiscard]] bool contains(const Signal& mu) const;
};

/// The four benchmark signals, ordered from smooth to rough.
enum class SignalKind { Supersmooth, Smooth3, Smooth21, Rough };

std::string_view to_string(SignalKind kind);
/// Accepts `supersmooth`, `smooth3`, `smooth21`, `rough`; throws std::invalid_argument.
SignalKind parse_signal_kind(std::string_view name);

/// supersmooth: 5 exp(-0.1 i)
/// smooth3:     500 |U_i| i^-2.05, U_i ~ Uniform(0,1) drawn in index order
/// smooth21:    5000 |sin(0.01 i)| i^-1.6
/// rough:       250 |sin(0.002 i)| i^-0.8
/// Throws MissingSeed for smooth3 without a seed.
Signal make_paper_signal(SignalKind kind, std::size_t dimension,
                         std::optional<std::uint64_t> seed = std::nullopt);

Signal make_zero_signal(std::size_t dimension);

/// Continuous squared bias B^2_t(mu).
double bias(const Signal& mu, double t);

/// Continuous alpha-bias B^2_{t,alpha}(mu); weights lambda_i^(2+2 alpha) mu_i^2.
double alpha_bias(const Signal& mu, const Spectrum& s, double alpha, double t);

/// sqrt(sum_i i^(2 beta) mu_i^2): the smallest r with mu in H^beta(r, D).
double sobolev_radius(const Signal& mu, double beta);

/// Finite-horizon polished tail check: for every m with rho*m <= D,
///   sum_{i >= m} mu_i^2 <= c0 * sum_{i=m}^{rho m} mu_i^2.
bool polished_tail_check(const Signal& mu, int rho, double c0);

/// Signal CSV: header `index,mu`.
Signal load_signal(const std::filesystem::path& path);
void save_signal(const Signal& mu, const std::filesystem::path& path);

/// mu_i^2 for every i.
std::vector<double> squared_coefficients(const Signal& mu);
/// lambda_i^(2+2 alpha) mu_i^2 for every i.
std::vector<double> alpha_bias_weights(const Signal& mu, const Spectrum& s, double alpha);

}  // namespace smoothstop
