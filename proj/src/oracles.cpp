#include "smoothstop/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "smoothstop/errors.hpp"
#include "smoothstop/numeric.hpp"

namespace smoothstop {

namespace {

/// Nonincreasing tail sums and nondecreasing prefix sums evaluated at the
/// integers 0..D. Both continuous curves are affine between integers.
struct IntegerCurves {
    std::vector<double> tail;    // tail[m] = sum_{i > m} b_i
    std::vector<double> prefix;  // prefix[m] = sum_{i <= m} v_i
    std::vector<double> b;
    std::vector<double> v;
};

IntegerCurves build_curves(std::vector<double> b, std::vector<double> v) {
    const std::size_t d = b.size();
    IntegerCurves c{std::vector<double>(d + 1, 0.0), std::vector<double>(d + 1, 0.0),
                    std::move(b), std::move(v)};
    CompensatedSum tail;
    for (std::size_t m = d; m > 0; --m) {
        tail.add(c.b[m - 1]);
        c.tail[m - 1] = tail.value();
    }
    CompensatedSum prefix;
    for (std::size_t m = 1; m <= d; ++m) {
        prefix.add(c.v[m - 1]);
        c.prefix[m] = prefix.value();
    }
    return c;
}

/// First t with tail(t) + offset <= prefix(t).
double first_crossing(const IntegerCurves& c, double offset) {
    const std::size_t d = c.b.size();
    std::size_t m = 0;
    while (m < d && c.tail[m] + offset > c.prefix[m]) ++m;
    if (m == 0) return 0.0;
    if (m == d && c.tail[d] + offset > c.prefix[d]) return static_cast<double>(d);
    // On [m-1, m]: gap(s) = gap(m-1) - s (b_m + v_m), s in [0, 1].
    const double gap = c.tail[m - 1] + offset - c.prefix[m - 1];
    const double slope = c.b[m - 1] + c.v[m - 1];
    const double s = slope > 0.0 ? std::clamp(gap / slope, 0.0, 1.0) : 1.0;
    return static_cast<double>(m - 1) + s;
}

std::vector<double> scaled(std::vector<double> w, double factor) {
    for (double& x : w) x *= factor;
    return w;
}

void check_delta(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be a finite nonnegative number");
}

void check_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

ClassicalOracle classical_oracle(const Spectrum& s, const Signal& mu, double delta) {
    check_dimension(s.dimension(), mu.dimension(), "classical_oracle");
    check_delta(delta);
    const auto c = build_curves(squared_coefficients(mu), scaled(s.inverse_squares(), delta * delta));
    ClassicalOracle best{0, c.tail[0] + c.prefix[0]};
    for (std::size_t m = 1; m <= s.dimension(); ++m) {
        const double r = c.tail[m] + c.prefix[m];
        if (r < best.risk) best = {m, r};
    }
    return best;
}

double balanced_oracle(const Spectrum& s, const Signal& mu, double delta) {
    check_dimension(s.dimension(), mu.dimension(), "balanced_oracle");
    check_delta(delta);
    const auto c = build_curves(squared_coefficients(mu), scaled(s.inverse_squares(), delta * delta));
    return first_crossing(c, 0.0);
}

double alpha_balanced_oracle(const Spectrum& s, const Signal& mu, double delta, double alpha) {
    check_dimension(s.dimension(), mu.dimension(), "alpha_balanced_oracle");
    check_delta(delta);
    const auto c = build_curves(alpha_bias_weights(mu, s, alpha),
                                scaled(s.smoothing_weights(alpha), delta * delta));
    return first_crossing(c, 0.0);
}

double oracle_proxy(const Spectrum& s, const Signal& mu, double delta, const StoppingConfig& cfg) {
    check_dimension(s.dimension(), mu.dimension(), "oracle_proxy");
    check_delta(delta);
    if (!(cfg.kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    const auto c = build_curves(alpha_bias_weights(mu, s, cfg.alpha),
                                scaled(s.smoothing_weights(cfg.alpha), delta * delta));
    // E R^2_t <= kappa  <=>  B^2_{t,a} + (sum - kappa) <= V_{t,a}.
    const double offset = default_kappa(s, cfg.alpha, delta) - cfg.kappa;
    return first_crossing(c, offset);
}

double expected_residual(const Spectrum& s, const Signal& mu, double delta, double alpha, double t) {
    check_dimension(s.dimension(), mu.dimension(), "expected_residual");
    if (t == static_cast<double>(s.dimension())) {
        detail::split_index(t, s.dimension());
        return 0.0;
    }
    return alpha_bias(mu, s, alpha, t) + default_kappa(s, alpha, delta) -
           alpha_variance(s, delta, alpha, t);
}

std::size_t discrete_balanced_index(const Spectrum& s, const Signal& mu, double delta) {
    check_dimension(s.dimension(), mu.dimension(), "discrete_balanced_index");
    check_delta(delta);
    const auto c = build_curves(squared_coefficients(mu), scaled(s.inverse_squares(), delta * delta));
    std::size_t m = 0;
    while (m < s.dimension() && c.tail[m] > c.prefix[m]) ++m;
    return m;
}

OracleReport oracle_report(const Spectrum& s, const Signal& mu, double delta,
                           const StoppingConfig& cfg) {
    return {classical_oracle(s, mu, delta), balanced_oracle(s, mu, delta),
            alpha_balanced_oracle(s, mu, delta, cfg.alpha), oracle_proxy(s, mu, delta, cfg),
            discrete_balanced_index(s, mu, delta)};
}

Regime classify_alpha_p(double alpha, double p, double boundary) {
    const double ap = alpha * p;
    if (std::abs(ap - boundary) <= 1e-12 * boundary) return Regime::At;
    return ap < boundary ? Regime::Below : Regime::Above;
}

double minimax_index(double beta, double p, double r, double delta) {
    check_positive(r, "r");
    check_positive(delta, "delta");
    const double snr = (r * r) / (delta * delta);
    return std::pow(snr, 1.0 / (2.0 * beta + 2.0 * p + 1.0));
}

double alpha_minimax_index(double beta, double p, double r, double delta, double alpha) {
    check_positive(r, "r");
    check_positive(delta, "delta");
    const double snr = (r * r) / (delta * delta);
    const double ap = alpha * p;
    switch (classify_alpha_p(alpha, p, 0.5)) {
        case Regime::Below:
            return std::pow((1.0 - 2.0 * ap) * snr, 1.0 / (2.0 * beta + 2.0 * p + 1.0));
        case Regime::At:
            if (!(snr > 1.0))
                throw std::invalid_argument("alpha p = 1/2 requires r^2 / delta^2 > 1");
            return std::pow(snr / std::log(snr), 1.0 / (2.0 * beta + 2.0 * p + 1.0));
        case Regime::Above:
            break;
    }
    return std::pow(snr, 1.0 / (2.0 * beta + 2.0 * p + 2.0 * ap));
}

double minimax_rate(double beta, double p, double r, double delta) {
    check_positive(r, "r");
    check_positive(delta, "delta");
    const double x = (delta * delta) / (r * r);
    return r * r * std::pow(x, 2.0 * beta / (2.0 * beta + 2.0 * p + 1.0));
}

double smoothing_rate(double beta, double p, double r, double delta, double alpha) {
    check_positive(r, "r");
    check_positive(delta, "delta");
    const double x = (delta * delta) / (r * r);
    const double ap = alpha * p;
    switch (classify_alpha_p(alpha, p, 0.5)) {
        case Regime::Below:
            return r * r * std::pow(x / (1.0 - 2.0 * ap), 2.0 * beta / (2.0 * beta + 2.0 * p + 1.0));
        case Regime::At: {
            const double snr = 1.0 / x;
            if (!(snr > 1.0))
                throw std::invalid_argument("alpha p = 1/2 requires r^2 / delta^2 > 1");
            return r * r * std::pow(x * std::log(snr), 2.0 * beta / (2.0 * beta + 2.0 * p + 1.0));
        }
        case Regime::Above:
            break;
    }
    return r * r * std::pow(x, 2.0 * beta / (2.0 * beta + 2.0 * p + 2.0 * ap));
}

}  // namespace smoothstop
