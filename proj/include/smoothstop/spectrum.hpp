#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace smoothstop {

/// Polynomial decay metadata: C_A^-1 i^-p <= lambda_i <= C_A i^-p.
struct DecayMetadata {
    double exponent = 0.0;  // p
    double constant = 1.0;  // C_A
};

/// Singular values lambda_1 >= ... >= lambda_D > 0 of a diagonalized forward
/// operator. Immutable once constructed.
class Spectrum {
public:
    /// Throws std::invalid_argument on an empty, non-positive, non-finite or
    /// increasing sequence, or when decay metadata is inconsistent.
    explicit Spectrum(std::vector<double> values,
                      std::optional<DecayMetadata> decay = std::nullopt);

    [[nodiscard]] std::size_t dimension() const { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const std::optional<DecayMetadata>& decay() const { return decay_; }

    /// lambda_i^(2 alpha) for every i.
    [[nodiscard]] std::vector<double> smoothing_weights(double alpha) const;
    /// lambda_i^-2 for every i.
    [[nodiscard]] std::vector<double> inverse_squares() const;

private:
    std::vector<double> values_;
    std::optional<DecayMetadata> decay_;
};

/// lambda_i = i^-p, i = 1..D, with C_A = 1.
Spectrum make_polynomial_spectrum(double p, std::size_t dimension);

/// Divides every value by lambda_1.
Spectrum normalize(const Spectrum& s);

/// Continuous variance V_t of the cut-off estimator (piecewise linear in t).
double variance(const Spectrum& s, double delta, double t);

/// Continuous alpha-variance V_{t,alpha}.
double alpha_variance(const Spectrum& s, double delta, double alpha, double t);

/// s_D = sqrt(2 sum lambda_i^(4 alpha)).
double sd_std(const Spectrum& s, double alpha);

bool psd_check(const Spectrum& s, double p, double c_a);

/// Spectrum CSV: header `index,lambda`, indices 1..D ascending.
Spectrum load_spectrum(const std::filesystem::path& path);
void save_spectrum(const Spectrum& s, const std::filesystem::path& path);

namespace detail {

/// Validates 0 <= t <= D and splits t into (floor, fractional part).
struct SplitIndex {
    std::size_t whole;
    double frac;
};
SplitIndex split_index(double t, std::size_t dimension);

/// Evaluates sum_{i <= floor t} w_i + frac(t) w_{ceil t}: the interpolated
/// prefix sum shared by every variance-type functional.
double interpolated_prefix(std::span<const double> weights, double t);

/// Evaluates (ceil t - t) w_{ceil t} + sum_{i > ceil t} w_i: the interpolated
/// tail sum shared by every bias-type functional.
double interpolated_tail(std::span<const double> weights, double t);

}  // namespace detail

}  // namespace smoothstop
