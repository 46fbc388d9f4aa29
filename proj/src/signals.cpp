#include "smoothstop/signals.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothstop/csv.hpp"
#include "smoothstop/errors.hpp"
#include "smoothstop/numeric.hpp"
#include "smoothstop/random.hpp"

namespace smoothstop {

bool SobolevBall::contains(const Signal& mu) const {
    check_dimension(dimension, mu.dimension(), "SobolevBall::contains");
    return sobolev_radius(mu, beta) <= radius;
}

std::string_view to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::Supersmooth: return "supersmooth";
        case SignalKind::Smooth3: return "smooth3";
        case SignalKind::Smooth21: return "smooth21";
        case SignalKind::Rough: return "rough";
    }
    return "unknown";
}

SignalKind parse_signal_kind(std::string_view name) {
    if (name == "supersmooth") return SignalKind::Supersmooth;
    if (name == "smooth3") return SignalKind::Smooth3;
    if (name == "smooth21") return SignalKind::Smooth21;
    if (name == "rough") return SignalKind::Rough;
    throw std::invalid_argument("unknown signal kind '" + std::string(name) + "'");
}

Signal make_paper_signal(SignalKind kind, std::size_t dimension,
                         std::optional<std::uint64_t> seed) {
    if (dimension == 0) throw std::invalid_argument("D must be >= 1");
    if (kind == SignalKind::Smooth3 && !seed)
        throw MissingSeed("signal smooth3 draws uniforms and needs a seed");

    Signal mu{std::vector<double>(dimension), std::string(to_string(kind)),
              kind == SignalKind::Smooth3 ? seed : std::nullopt};
    std::optional<rng::CounterStream> stream;
    if (seed && kind == SignalKind::Smooth3) stream.emplace(*seed);

    for (std::size_t k = 0; k < dimension; ++k) {
        const double i = static_cast<double>(k + 1);
        double v = 0.0;
        switch (kind) {
            case SignalKind::Supersmooth: v = 5.0 * std::exp(-0.1 * i); break;
            case SignalKind::Smooth3: v = 500.0 * stream->uniform(k) * std::pow(i, -2.05); break;
            case SignalKind::Smooth21: v = 5000.0 * std::abs(std::sin(0.01 * i)) * std::pow(i, -1.6); break;
            case SignalKind::Rough: v = 250.0 * std::abs(std::sin(0.002 * i)) * std::pow(i, -0.8); break;
        }
        mu.coefficients[k] = v;
    }
    return mu;
}

Signal make_zero_signal(std::size_t dimension) {
    return Signal{std::vector<double>(dimension, 0.0), "zero", std::nullopt};
}

std::vector<double> squared_coefficients(const Signal& mu) {
    std::vector<double> sq(mu.dimension());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = mu.coefficients[i] * mu.coefficients[i];
    return sq;
}

std::vector<double> alpha_bias_weights(const Signal& mu, const Spectrum& s, double alpha) {
    check_dimension(s.dimension(), mu.dimension(), "alpha_bias");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    std::vector<double> w(mu.dimension());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double lambda = s[i];
        w[i] = lambda * lambda * smoothing_weight(lambda, alpha) * mu.coefficients[i] *
               mu.coefficients[i];
    }
    return w;
}

double bias(const Signal& mu, double t) {
    auto sq = squared_coefficients(mu);
    return detail::interpolated_tail(sq, t);
}

double alpha_bias(const Signal& mu, const Spectrum& s, double alpha, double t) {
    auto w = alpha_bias_weights(mu, s, alpha);
    return detail::interpolated_tail(w, t);
}

double sobolev_radius(const Signal& mu, double beta) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < mu.dimension(); ++k) {
        const double c = mu.coefficients[k];
        if (c == 0.0) continue;
        acc.add(std::pow(static_cast<double>(k + 1), 2.0 * beta) * c * c);
    }
    return std::sqrt(acc.value());
}

bool polished_tail_check(const Signal& mu, int rho, double c0) {
    if (rho < 2) throw std::invalid_argument("rho must be an integer >= 2");
    const auto sq = squared_coefficients(mu);
    const std::size_t d = sq.size();
    const auto r = static_cast<std::size_t>(rho);

    // suffix[k] = sum_{i >= k+1} mu_i^2 (1-based i), suffix[d] = 0.
    std::vector<double> suffix(d + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = d; k > 0; --k) {
        acc.add(sq[k - 1]);
        suffix[k - 1] = acc.value();
    }
    for (std::size_t m = 1; m * r <= d; ++m) {
        const double tail = suffix[m - 1];
        const double block = suffix[m - 1] - suffix[m * r];
        if (tail > c0 * block) return false;
    }
    return true;
}

Signal load_signal(const std::filesystem::path& path) {
    Signal mu;
    mu.coefficients = csv::read_indexed_column(path, "mu");
    mu.label = path.stem().string();
    return mu;
}

void save_signal(const Signal& mu, const std::filesystem::path& path) {
    csv::write_indexed_column(path, "mu", mu.coefficients);
}

}  // namespace smoothstop
