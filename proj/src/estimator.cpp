#include "smoothstop/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "smoothstop/errors.hpp"
#include "smoothstop/numeric.hpp"
#include "smoothstop/random.hpp"

namespace smoothstop {

Estimate truncated_estimate(const Observation& obs, const Spectrum& s, std::size_t m) {
    check_dimension(s.dimension(), obs.dimension(), "truncated_estimate");
    if (m > s.dimension())
        throw std::out_of_range("truncation m=" + std::to_string(m) + " exceeds D=" +
                                std::to_string(s.dimension()));
    Estimate est{std::vector<double>(s.dimension(), 0.0), static_cast<double>(m), std::nullopt};
    for (std::size_t i = 0; i < m; ++i) est.coefficients[i] = obs.y[i] / s[i];
    return est;
}

Estimate continuous_estimate(const Observation& obs, const Spectrum& s, double t, bool xi) {
    check_dimension(s.dimension(), obs.dimension(), "continuous_estimate");
    auto [whole, frac] = detail::split_index(t, s.dimension());
    Estimate est = truncated_estimate(obs, s, whole);
    est.truncation = t;
    if (frac > 0.0) {
        est.randomization = xi;
        if (xi) est.coefficients[whole] = obs.y[whole] / s[whole];
    }
    return est;
}

Estimate continuous_estimate(const Observation& obs, const Spectrum& s, double t,
                             std::uint64_t rand_seed) {
    auto [whole, frac] = detail::split_index(t, s.dimension());
    const bool xi = frac > 0.0 && rng::CounterStream(rand_seed).uniform(0) < frac;
    return continuous_estimate(obs, s, t, xi);
}

double squared_loss(const Estimate& est, const Signal& mu) {
    check_dimension(mu.dimension(), est.coefficients.size(), "squared_loss");
    CompensatedSum acc;
    for (std::size_t i = 0; i < mu.dimension(); ++i) {
        const double d = est.coefficients[i] - mu.coefficients[i];
        acc.add(d * d);
    }
    return acc.value();
}

double risk(const Spectrum& s, const Signal& mu, double delta, double t) {
    check_dimension(s.dimension(), mu.dimension(), "risk");
    return bias(mu, t) + variance(s, delta, t);
}

double stochastic_error(std::span<const double> eps, const Spectrum& s, double delta, double t) {
    check_dimension(s.dimension(), eps.size(), "stochastic_error");
    std::vector<double> w(eps.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = eps[i] * eps[i] / (s[i] * s[i]);
    return delta * delta * detail::interpolated_prefix(w, t);
}

double stochastic_error(const Observation& obs, const Spectrum& s, double t) {
    if (!obs.noise) throw std::invalid_argument("stochastic_error: observation has no retained noise");
    return stochastic_error(*obs.noise, s, obs.delta, t);
}

}  // namespace smoothstop
