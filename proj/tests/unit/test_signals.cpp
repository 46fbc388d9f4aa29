#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "reference.hpp"
#include "smoothstop/errors.hpp"
#include "smoothstop/signals.hpp"

using namespace smoothstop;

TEST(Signals, PaperSignalValues) {
    auto sup = make_paper_signal(SignalKind::Supersmooth, 200);
    EXPECT_NEAR(sup.coefficients[0], 4.52419, 1e-5);
    EXPECT_DOUBLE_EQ(sup.coefficients[0], 5.0 * std::exp(-0.1));

    auto smooth = make_paper_signal(SignalKind::Smooth21, 200);
    EXPECT_NEAR(smooth.coefficients[99], 5000.0 * std::sin(1.0) * std::pow(100.0, -1.6), 1e-14);

    auto rough = make_paper_signal(SignalKind::Rough, 200);
    EXPECT_NEAR(rough.coefficients[0], 250.0 * std::sin(0.002), 1e-15);
    EXPECT_EQ(rough.label, "rough");
}

TEST(Signals, Smooth3NeedsSeedAndIsReproducible) {
    EXPECT_THROW(make_paper_signal(SignalKind::Smooth3, 10), MissingSeed);
    auto a = make_paper_signal(SignalKind::Smooth3, 300, 99);
    auto b = make_paper_signal(SignalKind::Smooth3, 300, 99);
    auto c = make_paper_signal(SignalKind::Smooth3, 300, 100);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_NE(a.coefficients, c.coefficients);
    // Index-ordered draws: a shorter signal is a prefix of a longer one.
    auto short_a = make_paper_signal(SignalKind::Smooth3, 50, 99);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(short_a.coefficients[i], a.coefficients[i]);
    for (std::size_t i = 0; i < 300; ++i) {
        const double envelope = 500.0 * std::pow(i + 1.0, -2.05);
        EXPECT_GT(a.coefficients[i], 0.0);
        EXPECT_LT(a.coefficients[i], envelope);
    }
}

TEST(Signals, ParseKind) {
    EXPECT_EQ(parse_signal_kind("smooth21"), SignalKind::Smooth21);
    EXPECT_THROW(parse_signal_kind("wiggly"), std::invalid_argument);
}

TEST(Signals, Bias) {
    Signal mu{{3, 2, 1}, "m", {}};
    EXPECT_DOUBLE_EQ(bias(mu, 1.5), 3.0);
    EXPECT_EQ(bias(mu, 3.0), 0.0);
    EXPECT_EQ(bias(make_zero_signal(4), 2.7), 0.0);
    EXPECT_DOUBLE_EQ(bias(mu, 0.0), 14.0);
    EXPECT_THROW(bias(mu, 3.5), std::out_of_range);
}

TEST(Signals, AlphaBias) {
    Signal mu{{3, 2, 1}, "m", {}};
    Spectrum unit({1.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(alpha_bias(mu, unit, 0.7, 1.5), 3.0);
    EXPECT_DOUBLE_EQ(alpha_bias(Signal{{0, 2}, "", {}}, Spectrum({1.0, 0.5}), 1.0, 1.0), 0.25);
    EXPECT_THROW(alpha_bias(mu, Spectrum({1.0, 0.5}), 1.0, 1.0), DimensionMismatch);

    // Oracle: direct summation over i = 11..100.
    auto s = make_polynomial_spectrum(0.5, 100);
    auto sup = make_paper_signal(SignalKind::Supersmooth, 100);
    long double expected = 0;
    for (int i = 11; i <= 100; ++i) {
        const long double m = 5.0L * std::exp(-0.1L * i);
        expected += std::pow((long double)i, -1.5L) * m * m;  // lambda^(2+2*0.5) = i^-1.5
    }
    EXPECT_NEAR(alpha_bias(sup, s, 0.5, 10.0), (double)expected, 1e-14 * (double)expected);
}

TEST(Signals, SobolevRadius) {
    EXPECT_DOUBLE_EQ(sobolev_radius(Signal{{1, 1}, "", {}}, 1.0), std::sqrt(5.0));
    EXPECT_EQ(sobolev_radius(make_zero_signal(5), 2.0), 0.0);
    EXPECT_DOUBLE_EQ(sobolev_radius(Signal{{0.5}, "", {}}, 3.0), 0.5);
    Signal mu{{3, 4}, "", {}};
    EXPECT_DOUBLE_EQ(sobolev_radius(mu, 0.0), 5.0);
    EXPECT_TRUE((SobolevBall{0.0, 5.0, 2}.contains(mu)));
    EXPECT_FALSE((SobolevBall{1.0, 5.0, 2}.contains(mu)));
}

TEST(Signals, SobolevGrowthMatchesSmoothnessLabels) {
    // Radius ratio between D = 1e4 and 1e3: near 1 below the label's beta, clearly growing above.
    struct Case {
        SignalKind kind;
        double beta;
    };
    for (const auto& c : {Case{SignalKind::Smooth3, 1.5}, Case{SignalKind::Smooth21, 1.05},
                          Case{SignalKind::Rough, 0.25}}) {
        auto small = make_paper_signal(c.kind, 1000, 3);
        auto large = make_paper_signal(c.kind, 10000, 3);
        const double below = sobolev_radius(large, c.beta - 0.25) / sobolev_radius(small, c.beta - 0.25);
        const double above = sobolev_radius(large, c.beta + 0.5) / sobolev_radius(small, c.beta + 0.5);
        EXPECT_LT(below, 1.2) << to_string(c.kind);
        EXPECT_GT(above, 2.5) << to_string(c.kind);
    }
    auto small = make_paper_signal(SignalKind::Supersmooth, 1000);
    auto large = make_paper_signal(SignalKind::Supersmooth, 10000);
    EXPECT_LT(sobolev_radius(large, 5.0) / sobolev_radius(small, 5.0), 1.01);
}

namespace {

bool polished_reference(const std::vector<double>& mu, int rho, double c0) {
    const std::size_t d = mu.size();
    for (std::size_t m = 1; m * rho <= d; ++m) {
        long double tail = 0, block = 0;
        for (std::size_t i = m; i <= d; ++i) tail += (long double)mu[i - 1] * mu[i - 1];
        for (std::size_t i = m; i <= m * rho; ++i) block += (long double)mu[i - 1] * mu[i - 1];
        if (tail > c0 * block) return false;
    }
    return true;
}

}  // namespace

TEST(Signals, PolishedTail) {
    Signal geo{{}, "geo", {}};
    for (int i = 1; i <= 20; ++i) geo.coefficients.push_back(std::pow(2.0, -i));
    ASSERT_TRUE(polished_reference(geo.coefficients, 2, 4.0 / 3.0));
    EXPECT_TRUE(polished_tail_check(geo, 2, 4.0 / 3.0));

    Signal spike{std::vector<double>(10, 0.0), "spike", {}};
    spike.coefficients[9] = 1.0;
    ASSERT_FALSE(polished_reference(spike.coefficients, 2, 1.0));
    EXPECT_FALSE(polished_tail_check(spike, 2, 1.0));
    EXPECT_FALSE(polished_tail_check(spike, 2, 100.0));

    EXPECT_TRUE(polished_tail_check(make_zero_signal(9), 3, 0.5));
    EXPECT_THROW(polished_tail_check(geo, 1, 1.0), std::invalid_argument);
}

TEST(SignalsProperty, PolishedTailAgreesWithBruteForce) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto in = reference::random_instance(gen, 2 + gen() % 30);
        const int rho = 2 + static_cast<int>(gen() % 3);
        const double c0 = 0.5 + 4.0 * u(gen);
        EXPECT_EQ(polished_tail_check(Signal{in.mu, "", {}}, rho, c0), polished_reference(in.mu, rho, c0));
    }
}

TEST(SignalsProperty, BiasCurvesMonotoneAndMatchReference) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto in = reference::random_instance(gen, 1 + gen() % 40);
        Spectrum s(in.lambda);
        Signal mu{in.mu, "", {}};
        const double alpha = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
        double prev = bias(mu, 0.0);
        for (double t = 0.0; t <= s.dimension(); t += 0.25) {
            const double b = bias(mu, t);
            EXPECT_NEAR(b, (double)reference::bias(in.mu, t), 1e-12 * (1 + b));
            EXPECT_LE(b, prev * (1 + 1e-14));
            prev = b;
            const double ab = alpha_bias(mu, s, alpha, t);
            EXPECT_NEAR(ab, (double)reference::alpha_bias(in.lambda, in.mu, alpha, t), 1e-12 * (1 + ab));
            EXPECT_LE(ab, b * (1 + 1e-12));
            EXPECT_LE(alpha_bias(mu, s, alpha + 0.4, t), ab * (1 + 1e-12));
        }
    }
}

TEST(SignalsCsv, RoundTripAndErrors) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "smoothstop_signal_test";
    fs::create_directories(dir);
    auto mu = make_paper_signal(SignalKind::Smooth3, 500, 17);
    mu.coefficients[3] = -1.0 / 3.0;
    mu.coefficients[4] = 1e-300;
    save_signal(mu, dir / "mu.csv");
    EXPECT_EQ(load_signal(dir / "mu.csv").coefficients, mu.coefficients);

    std::ofstream(dir / "gap.csv") << "index,mu\n1,1\n2,1\n4,1\n5,1\n";
    EXPECT_THROW(load_signal(dir / "gap.csv"), ParseError);
    std::ofstream(dir / "nan.csv") << "index,mu\n1,1\n2,abc\n";
    EXPECT_THROW(load_signal(dir / "nan.csv"), ParseError);
    std::ofstream(dir / "cols.csv") << "index,mu\n1,1,2\n";
    EXPECT_THROW(load_signal(dir / "cols.csv"), ParseError);
}
