#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "reference.hpp"
#include "smoothstop/estimator.hpp"
#include "smoothstop/oracles.hpp"
#include "smoothstop/stopping.hpp"

using namespace smoothstop;

namespace {

constexpr std::size_t kD = 10000;
constexpr double kDelta = 0.01;

Signal paper(SignalKind kind) { return make_paper_signal(kind, kD, 1); }

}  // namespace

TEST(Oracles, ClassicalTieGoesToSmallestIndex) {
    auto c = classical_oracle(Spectrum({1.0, 1.0}), Signal{{2, 1}, "", {}}, 1.0);
    EXPECT_EQ(c.index, 1u);
    EXPECT_EQ(c.risk, 2.0);
}

TEST(Oracles, PaperClassicalIndices) {
    auto s = make_polynomial_spectrum(0.5, kD);
    EXPECT_EQ(classical_oracle(s, paper(SignalKind::Supersmooth), kDelta).index, 43u);
    EXPECT_EQ(classical_oracle(s, paper(SignalKind::Smooth21), kDelta).index, 504u);
    EXPECT_EQ(classical_oracle(s, paper(SignalKind::Rough), kDelta).index, 1331u);
}

TEST(Oracles, PaperBalancedIndices) {
    auto s = make_polynomial_spectrum(0.5, kD);
    auto near = [&](SignalKind k, double expected) {
        EXPECT_NEAR(std::ceil(balanced_oracle(s, paper(k), kDelta)), expected, 1.0) << to_string(k);
    };
    near(SignalKind::Supersmooth, 37);
    near(SignalKind::Smooth21, 445);
    near(SignalKind::Rough, 2379);
}

TEST(Oracles, ClassicalMatchesExhaustiveScan) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto in = reference::random_instance(gen, 1 + gen() % 60);
        auto c = classical_oracle(Spectrum(in.lambda), Signal{in.mu, "", {}}, in.delta);
        EXPECT_EQ(c.index, reference::classical_index(in.lambda, in.mu, in.delta));
        const double r = double(reference::bias(in.mu, c.index) + reference::variance(in.lambda, in.delta, c.index));
        EXPECT_NEAR(c.risk, r, 1e-12 * r);
    }
}

TEST(Oracles, BalancedExamples) {
    Spectrum ones({1.0, 1.0});
    EXPECT_NEAR(balanced_oracle(ones, Signal{{2, 3}, "", {}}, 1.0), 1.8, 1e-14);
    EXPECT_EQ(balanced_oracle(ones, make_zero_signal(2), 1.0), 0.0);
    EXPECT_EQ(alpha_balanced_oracle(ones, make_zero_signal(2), 1.0, 0.7), 0.0);
    EXPECT_EQ(discrete_balanced_index(ones, make_zero_signal(2), 1.0), 0u);
    EXPECT_EQ(discrete_balanced_index(ones, Signal{{2, 3}, "", {}}, 1.0), 2u);
}

TEST(Oracles, AlphaReductionOnUnitSpectrum) {
    std::vector<double> lambda(500, 1.0);
    Spectrum s(lambda);
    auto mu = make_paper_signal(SignalKind::Smooth21, 500);
    EXPECT_DOUBLE_EQ(alpha_balanced_oracle(s, mu, 0.01, 0.0), balanced_oracle(s, mu, 0.01));
}

TEST(Oracles, BalanceIsExactAtCrossing) {
    auto s = make_polynomial_spectrum(0.5, kD);
    for (auto kind : {SignalKind::Supersmooth, SignalKind::Smooth3, SignalKind::Smooth21, SignalKind::Rough}) {
        auto mu = paper(kind);
        const double tb = balanced_oracle(s, mu, kDelta);
        const double b = bias(mu, tb), v = variance(s, kDelta, tb);
        EXPECT_LE(std::abs(b - v), 1e-9 * std::max(b, v)) << to_string(kind);
        for (double alpha : {0.2, 0.5, 1.0, 1.5}) {
            const double ta = alpha_balanced_oracle(s, mu, kDelta, alpha);
            const double ba = alpha_bias(mu, s, alpha, ta), va = alpha_variance(s, kDelta, alpha, ta);
            EXPECT_LE(std::abs(ba - va), 1e-9 * std::max(ba, va)) << to_string(kind) << alpha;
        }
    }
}

TEST(Oracles, CrossingsMatchBisection) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto in = reference::random_instance(gen, 2 + gen() % 60);
        Spectrum s(in.lambda);
        Signal mu{in.mu, "", {}};
        const double alpha = 0.5 * (gen() % 4);
        auto gap = [&](double t) {
            return double(reference::alpha_bias(in.lambda, in.mu, alpha, t) -
                          reference::alpha_variance(in.lambda, in.delta, alpha, t));
        };
        const double expected = reference::first_root(gap, in.mu.size());
        EXPECT_NEAR(alpha_balanced_oracle(s, mu, in.delta, alpha), expected, 1e-9 * std::max(1.0, expected));
    }
}

TEST(Oracles, AlphaBalancedNonincreasing) {
    auto s = make_polynomial_spectrum(0.5, kD);
    for (auto kind : {SignalKind::Supersmooth, SignalKind::Smooth3, SignalKind::Smooth21, SignalKind::Rough}) {
        auto mu = paper(kind);
        const double tb = balanced_oracle(s, mu, kDelta);
        double previous = tb;
        for (double alpha : {0.0, 0.2, 0.5, 1.0, 1.5}) {
            const double ta = alpha_balanced_oracle(s, mu, kDelta, alpha);
            EXPECT_LE(ta, previous) << to_string(kind) << " " << alpha;
            EXPECT_LE(ta, tb);
            EXPECT_GE(ta, 0.0);
            previous = ta;
        }
    }
}

TEST(Oracles, BalancedRiskComparableToClassical) {
    auto s = make_polynomial_spectrum(0.5, kD);
    for (auto kind : {SignalKind::Supersmooth, SignalKind::Smooth3, SignalKind::Smooth21, SignalKind::Rough}) {
        auto mu = paper(kind);
        const double tb = balanced_oracle(s, mu, kDelta);
        EXPECT_LE(risk(s, mu, kDelta, tb), 2.0 * classical_oracle(s, mu, kDelta).risk) << to_string(kind);
    }
}

TEST(Oracles, DiscreteBalancedIsCeilingOfCrossing) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto in = reference::random_instance(gen, 1 + gen() % 60);
        Spectrum s(in.lambda);
        Signal mu{in.mu, "", {}};
        const double tb = balanced_oracle(s, mu, in.delta);
        std::size_t scan = 0;
        while (reference::bias(in.mu, scan) > reference::variance(in.lambda, in.delta, scan)) ++scan;
        EXPECT_EQ(discrete_balanced_index(s, mu, in.delta), scan);
        EXPECT_EQ(double(scan), std::ceil(tb));
    }
}

TEST(Oracles, ProxyTrichotomy) {
    auto s = make_polynomial_spectrum(0.5, kD);
    for (auto kind : {SignalKind::Supersmooth, SignalKind::Smooth21, SignalKind::Rough}) {
        auto mu = paper(kind);
        for (double alpha : {0.0, 0.5, 1.0}) {
            const double def = default_kappa(s, alpha, kDelta);
            const double ta = alpha_balanced_oracle(s, mu, kDelta, alpha);
            EXPECT_NEAR(oracle_proxy(s, mu, kDelta, {alpha, def, 1.0}), ta, 1e-9 * std::max(1.0, ta));
            EXPECT_LT(oracle_proxy(s, mu, kDelta, {alpha, def * 1.01, 1.0}), ta);
            EXPECT_GT(oracle_proxy(s, mu, kDelta, {alpha, def * 0.99, 1.0}), ta);
        }
    }
    EXPECT_EQ(oracle_proxy(s, make_zero_signal(kD), kDelta, {0.5, default_kappa(s, 0.5, kDelta), 1.0}), 0.0);
}

TEST(Oracles, ExpectedResidual) {
    auto s = make_polynomial_spectrum(0.5, 100);
    auto mu = make_paper_signal(SignalKind::Rough, 100);
    EXPECT_EQ(expected_residual(s, mu, 0.1, 0.5, 100.0), 0.0);
    EXPECT_NEAR(expected_residual(s, make_zero_signal(100), 0.1, 0.5, 0.0), default_kappa(s, 0.5, 0.1), 1e-15);
    EXPECT_THROW(expected_residual(s, mu, 0.1, 0.5, 100.5), std::out_of_range);
    EXPECT_THROW(expected_residual(s, mu, 0.1, 0.5, -0.5), std::out_of_range);
}

TEST(Oracles, OracleReportIsConsistent) {
    auto s = make_polynomial_spectrum(0.5, kD);
    auto mu = paper(SignalKind::Smooth21);
    auto report = oracle_report(s, mu, kDelta, {0.5, default_kappa(s, 0.5, kDelta), 1.0});
    EXPECT_EQ(report.classical.index, 504u);
    EXPECT_EQ(report.discrete_balanced, std::size_t(std::ceil(report.balanced)));
    EXPECT_LE(report.alpha_balanced, report.balanced);
    EXPECT_NEAR(report.proxy, report.alpha_balanced, 1e-9 * report.alpha_balanced);
}

TEST(Minimax, Index) {
    EXPECT_DOUBLE_EQ(minimax_index(1.3, 0.5, 0.2, 0.2), 1.0);
    const double beta = 1.0, p = 0.5;
    const double e = 2 * beta + 2 * p + 1;
    EXPECT_NEAR(minimax_index(beta, p, std::pow(2.0, e / 2), 1.0), 2.0, 1e-14);
    EXPECT_NEAR(alpha_minimax_index(1.0, 0.5, 1000.0, 1.0, 0.5), std::pow(0.5e6, 0.25), 1e-12);
    EXPECT_DOUBLE_EQ(alpha_minimax_index(1.0, 0.5, 10.0, 0.1, 0.0), minimax_index(1.0, 0.5, 10.0, 0.1));
    EXPECT_NEAR(alpha_minimax_index(1.0, 0.5, 1000.0, 1.0, 1.0), std::pow(1e6 / std::log(1e6), 0.25), 1e-9);
    EXPECT_NEAR(alpha_minimax_index(1.0, 0.5, 1000.0, 1.0, 2.0), std::pow(1e6, 1.0 / (2 + 1 + 2)), 1e-9);
    EXPECT_THROW(alpha_minimax_index(1.0, 0.5, 0.5, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(minimax_index(1.0, 0.5, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(minimax_index(1.0, 0.5, 1.0, -1.0), std::invalid_argument);
}

TEST(Minimax, Rates) {
    EXPECT_DOUBLE_EQ(minimax_rate(1.0, 0.5, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(smoothing_rate(2.0, 0.7, 3.0, 0.01, 0.0), minimax_rate(2.0, 0.7, 3.0, 0.01));
    EXPECT_THROW(minimax_rate(1.0, 0.5, -1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(smoothing_rate(1.0, 0.5, 1.0, 0.0, 0.2), std::invalid_argument);
    for (double beta : {0.5, 1.0, 3.0})
        for (double p : {0.25, 0.5, 1.0})
            for (double delta : {1e-1, 1e-3, 1e-5})
                for (double alpha : {1.5, 3.0}) {
                    if (alpha * p <= 0.5) continue;
                    EXPECT_GT(smoothing_rate(beta, p, 1.0, delta, alpha) / minimax_rate(beta, p, 1.0, delta), 1.0)
                        << beta << " " << p << " " << delta << " " << alpha;
                }
}

TEST(Minimax, RegimeClassification) {
    EXPECT_EQ(classify_alpha_p(0.5, 0.5, 0.5), Regime::Below);
    EXPECT_EQ(classify_alpha_p(1.0, 0.5, 0.5), Regime::At);
    EXPECT_EQ(classify_alpha_p(1.0 + 1e-15, 0.5, 0.5), Regime::At);
    EXPECT_EQ(classify_alpha_p(1.5, 0.5, 0.5), Regime::Above);
}

TEST(Minimax, BalancedIndexTracksMinimaxIndex) {
    // mu_i = i^-(beta + 0.55) has finite Sobolev radius for smoothness beta.
    const double beta = 1.0, p = 0.5;
    const std::size_t d = 20000;
    auto s = make_polynomial_spectrum(p, d);
    std::vector<double> coeffs(d);
    for (std::size_t i = 0; i < d; ++i) coeffs[i] = std::pow(i + 1.0, -(beta + 0.55));
    Signal mu{coeffs, "poly", {}};
    const double r = sobolev_radius(mu, beta);
    std::vector<double> ratios;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4})
        ratios.push_back(balanced_oracle(s, mu, delta) / minimax_index(beta, p, r, delta));
    const double c = *std::max_element(ratios.begin(), ratios.end());
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    EXPECT_LE(c / lo, 2.0);
}
