#include <gtest/gtest.h>

#include <cmath>

#include "smoothstop/errors.hpp"
#include "smoothstop/observation.hpp"
#include "smoothstop/random.hpp"

using namespace smoothstop;

TEST(Observation, InjectNoise) {
    Spectrum s({1.0, 0.5});
    auto a = inject_noise(s, make_zero_signal(2), 1.0, std::vector<double>{2.0, 0.1});
    // mu = 0 leaves only delta * eps.
    EXPECT_EQ(a.y, (std::vector<double>{2.0, 0.1}));
    auto b = inject_noise(Spectrum({1.0, 1.0}), Signal{{1, 1}, "", {}}, 0.5, std::vector<double>{-2.0, 2.0});
    EXPECT_EQ(b.y, (std::vector<double>{0.0, 2.0}));
    auto c = inject_noise(s, Signal{{3, 4}, "", {}}, 0.7, std::vector<double>{0.0, 0.0});
    EXPECT_EQ(c.y, (std::vector<double>{3.0, 2.0}));
    EXPECT_FALSE(c.seed);
    EXPECT_THROW(inject_noise(s, make_zero_signal(2), 1.0, std::vector<double>{1.0}), DimensionMismatch);
    EXPECT_THROW(inject_noise(s, make_zero_signal(3), 1.0, std::vector<double>{1.0, 1.0}), DimensionMismatch);
}

TEST(Observation, SimulateIsDeterministicAndExact) {
    auto s = make_polynomial_spectrum(0.5, 1000);
    auto mu = make_paper_signal(SignalKind::Supersmooth, 1000);
    auto a = simulate(s, mu, 0.01, 77);
    auto b = simulate(s, mu, 0.01, 77);
    auto c = simulate(s, mu, 0.01, 78);
    EXPECT_EQ(a.y, b.y);
    EXPECT_NE(a.y, c.y);
    ASSERT_TRUE(a.noise);
    rng::CounterStream stream(77);
    for (std::size_t i = 0; i < 1000; ++i) {
        EXPECT_EQ((*a.noise)[i], stream.normal(i));
        EXPECT_EQ(a.y[i], s[i] * mu.coefficients[i] + 0.01 * (*a.noise)[i]);
    }
    EXPECT_FALSE(simulate(s, mu, 0.01, 77, false).noise);
}

TEST(Observation, NoiselessDegenerateCase) {
    auto s = make_polynomial_spectrum(1.0, 5);
    auto mu = make_paper_signal(SignalKind::Rough, 5);
    auto obs = simulate(s, mu, 0.0, 3);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(obs.y[i], s[i] * mu.coefficients[i]);
    EXPECT_THROW(simulate(s, mu, -1.0, 3), std::invalid_argument);
    EXPECT_THROW(simulate(s, make_zero_signal(4), 1.0, 3), DimensionMismatch);
}

TEST(Observation, StandardizedNoiseHasZeroMean) {
    // Fixed coordinate i, 1e5 independent seeds.
    auto s = make_polynomial_spectrum(0.5, 4);
    auto mu = make_paper_signal(SignalKind::Supersmooth, 4);
    const std::size_t n = 100000;
    double sum = 0;
    for (std::size_t r = 0; r < n; ++r) {
        auto obs = simulate(s, mu, 0.3, rng::derive_seed(5, r, "moment", 0.0), false);
        sum += (obs.y[2] - s[2] * mu.coefficients[2]) / 0.3;
    }
    EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(double(n)));
}

TEST(Observation, PureNoiseSmoothedEnergy) {
    // mu = 0: E sum lambda^(2 alpha) Y^2 = sum lambda^(2 alpha) delta^2.
    auto s = make_polynomial_spectrum(0.5, 200);
    const double alpha = 0.5, delta = 0.1;
    const std::size_t n = 4000;
    std::vector<double> vals;
    double expected = 0;
    for (std::size_t i = 0; i < 200; ++i) expected += std::pow(s[i], 2 * alpha) * delta * delta;
    for (std::size_t r = 0; r < n; ++r) {
        auto obs = simulate(s, make_zero_signal(200), delta, rng::derive_seed(9, r, "energy", alpha), false);
        double e = 0;
        for (std::size_t i = 0; i < 200; ++i) e += std::pow(s[i], 2 * alpha) * obs.y[i] * obs.y[i];
        vals.push_back(e);
    }
    double mean = 0, var = 0;
    for (double v : vals) mean += v;
    mean /= n;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (n - 1) / n);
    EXPECT_NEAR(mean, expected, 4 * se);
}
