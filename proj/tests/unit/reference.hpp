#pragma once

// Test-only brute-force evaluations in long double, written straight from the
// defining sums. Deliberately shares no code with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace reference {

using Vec = std::vector<double>;

inline long double pow_ld(long double x, long double e) { return std::pow(x, e); }

/// sum_{i<=floor t} w_i + (t - floor t) w_ceil
inline long double prefix(const std::vector<long double>& w, double t) {
    const auto fl = static_cast<std::size_t>(std::floor(t));
    long double acc = 0;
    for (std::size_t i = 1; i <= fl; ++i) acc += w[i - 1];
    if (t > fl) acc += (t - fl) * w[fl];
    return acc;
}

/// (ceil t - t) w_ceil + sum_{i > ceil t} w_i
inline long double tail(const std::vector<long double>& w, double t) {
    const auto ce = static_cast<std::size_t>(std::ceil(t));
    long double acc = 0;
    for (std::size_t i = ce + 1; i <= w.size(); ++i) acc += w[i - 1];
    if (ce > 0) acc += (ce - t) * w[ce - 1];
    return acc;
}

inline std::vector<long double> var_weights(const Vec& lambda, double delta) {
    std::vector<long double> w;
    for (double l : lambda) w.push_back((long double)delta * delta / ((long double)l * l));
    return w;
}
inline std::vector<long double> alpha_var_weights(const Vec& lambda, double delta, double alpha) {
    std::vector<long double> w;
    for (double l : lambda) w.push_back((long double)delta * delta * pow_ld(l, 2.0L * alpha));
    return w;
}
inline std::vector<long double> bias_weights(const Vec& mu) {
    std::vector<long double> w;
    for (double m : mu) w.push_back((long double)m * m);
    return w;
}
inline std::vector<long double> alpha_bias_weights(const Vec& lambda, const Vec& mu, double alpha) {
    std::vector<long double> w;
    for (std::size_t i = 0; i < mu.size(); ++i)
        w.push_back(pow_ld(lambda[i], 2.0L + 2.0L * alpha) * (long double)mu[i] * mu[i]);
    return w;
}

inline long double variance(const Vec& lambda, double delta, double t) {
    return prefix(var_weights(lambda, delta), t);
}
inline long double alpha_variance(const Vec& lambda, double delta, double alpha, double t) {
    return prefix(alpha_var_weights(lambda, delta, alpha), t);
}
inline long double bias(const Vec& mu, double t) { return tail(bias_weights(mu), t); }
inline long double alpha_bias(const Vec& lambda, const Vec& mu, double alpha, double t) {
    return tail(alpha_bias_weights(lambda, mu, alpha), t);
}

/// R^2_{m,alpha} by direct summation of the tail.
inline long double residual(const Vec& lambda, const Vec& y, double alpha, std::size_t m) {
    long double acc = 0;
    for (std::size_t i = m + 1; i <= y.size(); ++i)
        acc += pow_ld(lambda[i - 1], 2.0L * alpha) * (long double)y[i - 1] * y[i - 1];
    return acc;
}

/// Smallest minimizer of B^2_m + V_m over m = 0..D by exhaustive scan.
inline std::size_t classical_index(const Vec& lambda, const Vec& mu, double delta) {
    std::size_t best = 0;
    long double best_risk = bias(mu, 0) + variance(lambda, delta, 0);
    for (std::size_t m = 1; m <= mu.size(); ++m) {
        const long double r = bias(mu, m) + variance(lambda, delta, m);
        if (r < best_risk) {
            best_risk = r;
            best = m;
        }
    }
    return best;
}

/// First crossing of tail curve below prefix curve, found by bisection on a
/// fine scan. Independent of the closed-form interval solve.
template <typename F>
double first_root(F gap, std::size_t d) {
    if (gap(0.0) <= 0) return 0.0;
    std::size_t m = 1;
    while (m < d && gap(double(m)) > 0) ++m;
    double lo = m - 1.0, hi = m;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0) lo = mid; else hi = mid;
    }
    return hi;
}

/// Random nonincreasing spectrum in (0, 1] and random signal.
struct Instance {
    Vec lambda;
    Vec mu;
    double delta;
};

inline Instance random_instance(std::mt19937_64& gen, std::size_t d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance in;
    double l = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        in.lambda.push_back(l);
        l *= 0.7 + 0.3 * u(gen);
    }
    const double decay = 0.5 + 2.0 * u(gen);
    for (std::size_t i = 0; i < d; ++i)
        in.mu.push_back((u(gen) < 0.9 ? 1.0 : 0.0) * (2.0 * u(gen) - 0.5) * std::pow(i + 1.0, -decay) * 5.0);
    in.delta = std::pow(10.0, -3.0 + 2.5 * u(gen));
    return in;
}

}  // namespace reference
