#pragma once

#include <cmath>
#include <span>

namespace smoothstop {

/// Neumaier-compensated accumulator. The running error term is folded back
/// into value() so long sums stay accurate to a few ulps.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : hi_(init) {}

    void add(double x) {
        double t = hi_ + x;
        if (std::abs(hi_) >= std::abs(x))
            lo_ += (hi_ - t) + x;
        else
            lo_ += (x - t) + hi_;
        hi_ = t;
    }

    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    CompensatedSum& operator-=(double x) {
        add(-x);
        return *this;
    }

    [[nodiscard]] double value() const { return hi_ + lo_; }

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// lambda^(2*alpha), evaluated as exp(2*alpha*ln(lambda)) except for the
/// exact cases alpha in {0, 0.5, 1}. Every code path that needs a smoothing
/// weight goes through here so the residual, kappa and alpha-variance
/// computations see bit-identical weights.
inline double smoothing_weight(double lambda, double alpha) {
    if (alpha == 0.0) return 1.0;
    if (alpha == 0.5) return lambda;
    if (alpha == 1.0) return lambda * lambda;
    return std::exp(2.0 * alpha * std::log(lambda));
}

}  // namespace smoothstop
