#include "smoothstop/spectrum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "smoothstop/csv.hpp"
#include "smoothstop/errors.hpp"
#include "smoothstop/numeric.hpp"

namespace smoothstop {

void check_dimension(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual)
        throw DimensionMismatch(std::string(what) + ": expected dimension " +
                                std::to_string(expected) + ", got " + std::to_string(actual));
}

Spectrum::Spectrum(std::vector<double> values, std::optional<DecayMetadata> decay)
    : values_(std::move(values)), decay_(decay) {
    if (values_.empty()) throw std::invalid_argument("spectrum must have D >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] <= 0.0)
            throw std::invalid_argument("singular value " + std::to_string(i + 1) +
                                        " is not strictly positive");
        if (i > 0 && values_[i] > values_[i - 1])
            throw std::invalid_argument("singular values must be nonincreasing (index " +
                                        std::to_string(i + 1) + ")");
    }
    if (decay_) {
        if (decay_->exponent < 0.0 || decay_->constant < 1.0)
            throw std::invalid_argument("decay metadata requires p >= 0 and C_A >= 1");
        if (!psd_check(*this, decay_->exponent, decay_->constant))
            throw std::invalid_argument("singular values violate their decay metadata");
    }
}

std::vector<double> Spectrum::smoothing_weights(double alpha) const {
    std::vector<double> w(values_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = smoothing_weight(values_[i], alpha);
    return w;
}

std::vector<double> Spectrum::inverse_squares() const {
    std::vector<double> w(values_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (values_[i] * values_[i]);
    return w;
}

Spectrum make_polynomial_spectrum(double p, std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("D must be >= 1");
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("p must be >= 0");
    std::vector<double> values(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
        const double idx = static_cast<double>(i + 1);
        values[i] = p == 0.0 ? 1.0 : p == 0.5 ? 1.0 / std::sqrt(idx) : p == 1.0 ? 1.0 / idx
                                                                                : std::pow(idx, -p);
    }
    return Spectrum(std::move(values), DecayMetadata{p, 1.0});
}

Spectrum normalize(const Spectrum& s) {
    const double top = s[0];
    std::vector<double> values(s.values().begin(), s.values().end());
    for (double& v : values) v /= top;
    values[0] = 1.0;
    // Metadata does not survive rescaling in general.
    return Spectrum(std::move(values));
}

namespace detail {

SplitIndex split_index(double t, std::size_t dimension) {
    if (!(t >= 0.0) || t > static_cast<double>(dimension))
        throw std::out_of_range("index t=" + csv::format(t) + " outside [0, " +
                                std::to_string(dimension) + "]");
    const double whole = std::floor(t);
    return {static_cast<std::size_t>(whole), t - whole};
}

double interpolated_prefix(std::span<const double> weights, double t) {
    auto [whole, frac] = split_index(t, weights.size());
    CompensatedSum acc;
    for (std::size_t i = 0; i < whole; ++i) acc.add(weights[i]);
    if (frac > 0.0) acc.add(frac * weights[whole]);
    return acc.value();
}

double interpolated_tail(std::span<const double> weights, double t) {
    auto [whole, frac] = split_index(t, weights.size());
    // ceil(t) as a 1-based index is whole + 1 when frac > 0, else whole.
    const std::size_t ceil_t = frac > 0.0 ? whole + 1 : whole;
    CompensatedSum acc;
    for (std::size_t i = weights.size(); i > ceil_t; --i) acc.add(weights[i - 1]);
    if (frac > 0.0) acc.add((1.0 - frac) * weights[ceil_t - 1]);
    return acc.value();
}

}  // namespace detail

double variance(const Spectrum& s, double delta, double t) {
    auto w = s.inverse_squares();
    return delta * delta * detail::interpolated_prefix(w, t);
}

double alpha_variance(const Spectrum& s, double delta, double alpha, double t) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    auto w = s.smoothing_weights(alpha);
    return delta * delta * detail::interpolated_prefix(w, t);
}

double sd_std(const Spectrum& s, double alpha) {
    CompensatedSum acc;
    for (double lambda : s.values()) {
        const double w = smoothing_weight(lambda, alpha);
        acc.add(w * w);
    }
    return std::sqrt(2.0 * acc.value());
}

bool psd_check(const Spectrum& s, double p, double c_a) {
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        const double ref = std::pow(static_cast<double>(i + 1), -p);
        // Relative slack of a few ulps so exact decays pass despite pow rounding.
        const double slack = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
        if (s[i] * slack < ref / c_a || s[i] > c_a * ref * slack) return false;
    }
    return true;
}

Spectrum load_spectrum(const std::filesystem::path& path) {
    auto values = csv::read_indexed_column(path, "lambda");
    try {
        return Spectrum(std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_spectrum(const Spectrum& s, const std::filesystem::path& path) {
    csv::write_indexed_column(path, "lambda", {s.values().begin(), s.values().end()});
}

}  // namespace smoothstop
