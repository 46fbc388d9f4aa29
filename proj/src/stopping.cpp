#include "smoothstop/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smoothstop/csv.hpp"
#include "smoothstop/errors.hpp"

namespace smoothstop {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be a finite nonnegative number");
}

double total_weighted_square(std::span<const double> y, std::span<const double> weights) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < y.size(); ++i) acc.add(weights[i] * y[i] * y[i]);
    return acc.value();
}

}  // namespace

double smoothed_residual(const Observation& obs, const Spectrum& s, double alpha, std::size_t m) {
    check_dimension(s.dimension(), obs.dimension(), "smoothed_residual");
    check_alpha(alpha);
    if (m > s.dimension())
        throw std::out_of_range("residual index m=" + std::to_string(m) + " exceeds D=" +
                                std::to_string(s.dimension()));
    CompensatedSum acc;
    for (std::size_t i = s.dimension(); i > m; --i) {
        const double y = obs.y[i - 1];
        acc.add(smoothing_weight(s[i - 1], alpha) * y * y);
    }
    return acc.value();
}

std::vector<double> residual_path(const Observation& obs, const Spectrum& s, double alpha) {
    check_dimension(s.dimension(), obs.dimension(), "residual_path");
    check_alpha(alpha);
    const auto weights = s.smoothing_weights(alpha);
    const std::size_t d = s.dimension();

    // Suffix accumulation R^2_m = R^2_{m+1} + w_{m+1} Y_{m+1}^2: every entry
    // is a sum of nonnegative terms, so deep tails keep full relative accuracy.
    std::vector<double> path(d + 1);
    CompensatedSum running;
    path[d] = 0.0;
    for (std::size_t m = d; m > 0; --m) {
        running += weights[m - 1] * obs.y[m - 1] * obs.y[m - 1];
        path[m - 1] = std::max(running.value(), path[m]);
    }
    return path;
}

double default_kappa(const Spectrum& s, double alpha, double delta) {
    check_alpha(alpha);
    CompensatedSum acc;
    for (double lambda : s.values()) acc.add(smoothing_weight(lambda, alpha));
    return delta * delta * acc.value();
}

bool validate_kappa(const StoppingConfig& cfg, const Spectrum& s, double delta) {
    if (!(cfg.kappa >= 0.0)) return false;
    const double deviation = std::abs(cfg.kappa - default_kappa(s, cfg.alpha, delta));
    return deviation <= cfg.c_kappa * sd_std(s, cfg.alpha) * delta * delta;
}

std::vector<std::string> config_warnings(const StoppingConfig& cfg, const Spectrum& s) {
    std::vector<std::string> out;
    if (cfg.kappa == 0.0)
        out.emplace_back("kappa = 0 only stops once the residual vanishes; expect tau = D");
    if (s.decay()) {
        const double ap = cfg.alpha * s.decay()->exponent;
        if (ap >= 0.5)
            out.emplace_back("alpha * p = " + csv::format(ap) +
                             " >= 1/2: oversmoothing regime, stopping times will be too early");
    }
    return out;
}

std::size_t stopping_time(std::span<const double> y, std::span<const double> weights, double kappa) {
    check_dimension(weights.size(), y.size(), "stopping_time");
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    SequentialStopper stopper(total_weighted_square(y, weights), kappa, y.size());
    while (!stopper.should_stop()) {
        const std::size_t i = stopper.index();
        stopper.consume(weights[i] * y[i] * y[i]);
    }
    return stopper.index();
}

std::size_t stopping_time(const Observation& obs, const Spectrum& s, const StoppingConfig& cfg) {
    check_dimension(s.dimension(), obs.dimension(), "stopping_time");
    check_alpha(cfg.alpha);
    const auto weights = s.smoothing_weights(cfg.alpha);
    return stopping_time(obs.y, weights, cfg.kappa);
}

}  // namespace smoothstop
