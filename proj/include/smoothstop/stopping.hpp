#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothstop/numeric.hpp"
#include "smoothstop/observation.hpp"
#include "smoothstop/spectrum.hpp"

namespace smoothstop {

struct StoppingConfig {
    double alpha = 0.0;    // smoothing parameter
    double kappa = 0.0;    // critical value
    double c_kappa = 1.0;  // admissibility constant C_kappa
};

/// R^2_{m,alpha} = sum_{i > m} lambda_i^(2 alpha) Y_i^2, by direct summation.
double smoothed_residual(const Observation& obs, const Spectrum& s, double alpha, std::size_t m);

/// (R^2_{0,alpha}, ..., R^2_{D,alpha}) via R^2_m = R^2_{m+1} + lambda_{m+1}^(2 alpha) Y_{m+1}^2.
/// The last entry is exactly 0.
std::vector<double> residual_path(const Observation& obs, const Spectrum& s, double alpha);

/// sum_i lambda_i^(2 alpha) delta^2: the pure-noise expectation of R^2_{0,alpha}.
double default_kappa(const Spectrum& s, double alpha, double delta);

/// |kappa - default_kappa| <= C_kappa s_D delta^2.
bool validate_kappa(const StoppingConfig& cfg, const Spectrum& s, double delta);

/// Human-readable warnings for configurations the theory flags: kappa == 0,
/// and alpha p >= 1/2 when the spectrum carries decay metadata.
std::vector<std::string> config_warnings(const StoppingConfig& cfg, const Spectrum& s);

/// Sequential discrepancy check. Starts from the full residual R^2_0 and
/// consumes one weighted square lambda_{m+1}^(2 alpha) Y_{m+1}^2 per step.
class SequentialStopper {
public:
    SequentialStopper(double initial_residual, double kappa, std::size_t dimension)
        : residual_(initial_residual), kappa_(kappa), dimension_(dimension) {}

    /// True once R^2_m <= kappa (or m == D).
    [[nodiscard]] bool should_stop() const {
        return index_ == dimension_ || residual_.value() <= kappa_;
    }
    void consume(double weighted_square) {
        residual_ -= weighted_square;
        ++index_;
    }
    [[nodiscard]] std::size_t index() const { return index_; }
    [[nodiscard]] double residual() const { return index_ == dimension_ ? 0.0 : residual_.value(); }

private:
    CompensatedSum residual_;
    double kappa_;
    std::size_t dimension_;
    std::size_t index_ = 0;
};

/// tau = inf{m : R^2_{m,alpha} <= kappa}. After the initial total, reads
/// coordinates 1..tau only.
std::size_t stopping_time(const Observation& obs, const Spectrum& s, const StoppingConfig& cfg);

/// Same rule on raw arrays: weights[i] = lambda_{i+1}^(2 alpha).
std::size_t stopping_time(std::span<const double> y, std::span<const double> weights, double kappa);

}  // namespace smoothstop
