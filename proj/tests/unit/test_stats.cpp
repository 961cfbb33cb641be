#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lecho/echo.hpp"
#include "lecho/error.hpp"
#include "lecho/special.hpp"
#include "lecho/stats.hpp"
#include "oracles.hpp"

using namespace lecho;

namespace {

QuenchParams near_critical(double temperature) {
    QuenchParams p;
    p.length = 50;
    p.h0 = 0.99;
    p.h1 = 1.01;
    p.gamma0 = p.gamma1 = 1.0;
    p.beta = 1.0 / temperature;
    return p;
}

std::vector<double> bimodal(std::size_t n, double sep, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g(rng) + (i % 2 ? sep : -sep);
    return v;
}

}  // namespace

TEST(Weights, FollowModeTable) {
    std::mt19937_64 rng(41);
    const ModeTable t(ref::random_params(rng, 20));
    const auto w = weights(t);
    const auto w2 = weights(t, true);
    ASSERT_EQ(w.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double c = std::cosh(t.params().beta * t[i].pre.lambda);
        const double s = std::sin(t[i].dtheta);
        EXPECT_NEAR(w.a[i], 0.5 * (1.0 - 1.0 / c) * s * s, 1e-15);
        EXPECT_NEAR(w.a_f[i], 0.5 * (1.0 - 1.0 / (c * c)) * s * s, 1e-15);
        EXPECT_NEAR(w2.a[i], 0.5 * (1.0 - 1.0 / c) * t[i].dtheta * t[i].dtheta, 1e-15);
        EXPECT_EQ(w.omega[i], 2.0 * t[i].post.lambda);
        EXPECT_GE(w.a[i], 0.0);
        EXPECT_LE(w.a[i], w.a_f[i]);
    }
    double s = 0.0, s2 = 0.0;
    for (double a : w.a) s += a, s2 += a * a;
    EXPECT_DOUBLE_EQ(w.zbar(), -s);
    EXPECT_DOUBLE_EQ(w.kappa2(), 0.5 * s2);
}

TEST(Weights, SecondOrderMeanMatchesLogEchoForSmallQuench) {
    QuenchParams p;
    p.length = 40;
    p.h0 = 0.3;
    p.h1 = 0.3 + 1e-3;
    p.gamma0 = p.gamma1 = 0.7;
    p.beta = 3.0;
    const ModeTable t(p);
    const auto s = sample_logle(t, default_tau(40), 20000, 5);
    EXPECT_NEAR(s.z_mean / weights(t).zbar(), 1.0, 0.02);
}

TEST(Sampling, UniformTimesAreDeterministicAndInRange) {
    const auto a = uniform_times(7.0, 1000, 99);
    const auto b = uniform_times(7.0, 1000, 99);
    const auto c = uniform_times(7.0, 1000, 100);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (double x : a) {
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 7.0);
    }
    std::mt19937_64 rng(99);
    EXPECT_EQ(a[0], 7.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

TEST(Sampling, RejectsBadHorizon) {
    EXPECT_THROW((void)uniform_times(0.0, 3, 1), ValidationError);
    EXPECT_THROW((void)uniform_times(-1.0, 3, 1), ValidationError);
    EXPECT_THROW((void)uniform_times(INFINITY, 3, 1), ValidationError);
    EXPECT_TRUE(uniform_times(1.0, 0, 1).empty());
}

TEST(Sampling, LogEchoAtSampledTimes) {
    const ModeTable t(near_critical(0.05));
    const auto s = sample_logle(t, 1000.0, 500, 3);
    ASSERT_EQ(s.z.size(), 500u);
    double mean = 0.0;
    for (std::size_t i = 0; i < s.z.size(); ++i) {
        EXPECT_EQ(s.z[i], log_loschmidt(t, s.times[i]));
        EXPECT_LE(s.z[i], 0.0);
        mean += s.z[i];
    }
    EXPECT_NEAR(s.z_mean, mean / 500.0, 1e-15);
    EXPECT_EQ(default_tau(50), 250000.0);
}

TEST(Moments, KnownSample) {
    const std::vector<double> v{1, 2, 3, 4, 10};
    const auto m = sample_moments(v);
    EXPECT_DOUBLE_EQ(m.mean, 4.0);
    EXPECT_DOUBLE_EQ(m.variance, 12.5);
    EXPECT_GT(m.skewness, 0.0);
    const auto z = sample_moments(std::vector<double>{});
    EXPECT_EQ(z.mean, 0.0);
    const auto c = sample_moments(std::vector<double>{2, 2, 2});
    EXPECT_EQ(c.variance, 0.0);
    EXPECT_EQ(c.skewness, 0.0);
}

TEST(Histogram, CountsEveryValue) {
    const auto v = bimodal(10001, 3.0, 1);
    const auto h = histogram(v, 57);
    EXPECT_EQ(h.size(), 57u);
    std::size_t total = 0;
    double integral = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        total += h.counts[i];
        integral += h.density(i, v.size()) * h.width;
    }
    EXPECT_EQ(total, v.size());
    EXPECT_NEAR(integral, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(h.lo, *std::min_element(v.begin(), v.end()));
    EXPECT_NEAR(h.lo + 57 * h.width, *std::max_element(v.begin(), v.end()), 1e-12);
}

TEST(Histogram, ConstantDataIsOneBin) {
    const std::vector<double> v(10, 3.5);
    const auto h = histogram(v, 50);
    EXPECT_EQ(h.size(), 1u);
    EXPECT_EQ(h.counts[0], 10u);
    EXPECT_EQ(freedman_diaconis_bins(v), 1u);
}

TEST(Histogram, RejectsBadInput) {
    EXPECT_THROW((void)histogram(std::vector<double>{}, 10), ValidationError);
    EXPECT_THROW((void)histogram(std::vector<double>{1.0, NAN}, 10), ValidationError);
    EXPECT_THROW((void)histogram(std::vector<double>{1.0, INFINITY}, 10), ValidationError);
}

TEST(Histogram, FreedmanDiaconis) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    // IQR 499.5, width 2 * 499.5 / 10 = 99.9, range 999.
    EXPECT_EQ(freedman_diaconis_bins(v), 10u);
    EXPECT_EQ(histogram(v, 0).size(), 10u);
    std::vector<double> spiky(1000, 0.0);
    spiky.back() = 1.0;
    EXPECT_EQ(freedman_diaconis_bins(spiky), 200u);
}

TEST(Peaks, MovingAverage) {
    const std::vector<std::size_t> c{0, 0, 5, 0, 0};
    const auto m = moving_average(c, 5);
    ASSERT_EQ(m.size(), 5u);
    // The window is clipped at the edges and averages what remains.
    EXPECT_DOUBLE_EQ(m[0], 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(m[1], 5.0 / 4.0);
    EXPECT_DOUBLE_EQ(m[2], 1.0);
    EXPECT_DOUBLE_EQ(m[4], m[0]);
    const auto id = moving_average(c, 1);
    EXPECT_DOUBLE_EQ(id[2], 5.0);
}

TEST(Peaks, BimodalHasTwo) {
    const auto h = histogram(bimodal(100000, 4.0, 2), 200);
    const auto p = find_peaks(h);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_GE(p[0].prominence, p[1].prominence);
    const double lo = std::min(p[0].location, p[1].location);
    const double hi = std::max(p[0].location, p[1].location);
    EXPECT_NEAR(lo, -4.0, 0.3);
    EXPECT_NEAR(hi, 4.0, 0.3);
    EXPECT_DOUBLE_EQ(p[0].prominence, 1.0);
}

TEST(Peaks, GaussianHasOne) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> v(100000);
    for (auto& x : v) x = g(rng);
    const auto p = find_peaks(histogram(v, 200));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0].location, 0.0, 0.2);
}

TEST(CharacteristicFunction, UnitAtOriginAndProductOfBessel) {
    const ModeTable t(near_critical(0.1));
    const auto w = weights(t);
    const std::vector<double> lam{0.0, 1.0, 7.5};
    const auto cf = char_fn(w, lam);
    EXPECT_EQ(cf[0], 1.0);
    double prod = 1.0;
    for (double a : w.a) prod *= bessel_j0(7.5 * a);
    EXPECT_NEAR(cf[2], prod, 1e-14);
    const std::vector<double> z{0.5, -0.5};
    const auto e = empirical_char_fn(z, 0.0, lam);
    EXPECT_NEAR(e[1].real(), std::cos(0.5), 1e-15);
    EXPECT_NEAR(e[1].imag(), 0.0, 1e-15);
    EXPECT_EQ(e[0], std::complex<double>(1.0, 0.0));
}

TEST(Classifier, ColdNearCriticalIsDoublePeaked) {
    const ModeTable t(near_critical(0.02));
    const auto c = classify(weights(t), sample_logle(t, default_tau(50), 100000, 20100917));
    EXPECT_EQ(c.label, DistributionLabel::DoublePeaked);
    EXPECT_TRUE(c.histogram_checked);
    EXPECT_GT(c.dominance, 0.6);
    EXPECT_LT(c.predicted_low, c.predicted_high);
}

TEST(Classifier, HotNearCriticalIsGaussian) {
    const ModeTable t(near_critical(0.18));
    const auto c = classify(weights(t), sample_logle(t, default_tau(50), 100000, 20100917));
    EXPECT_EQ(c.label, DistributionLabel::Gaussian);
    EXPECT_LT(c.dominance, 0.6);
}

TEST(Classifier, WeightsOnlyBelowHistogramThreshold) {
    const ModeTable t(near_critical(0.02));
    const auto c = classify(weights(t), sample_logle(t, 100.0, 10, 1));
    EXPECT_FALSE(c.histogram_checked);
    EXPECT_EQ(c.label, c.weight_label);
    EXPECT_TRUE(c.peaks.empty());
}

TEST(Classifier, ZeroQuenchIsDegenerate) {
    QuenchParams p = near_critical(0.1);
    p.h1 = p.h0;
    const ModeTable t(p);
    const auto c = classify(weights(t), sample_logle(t, 100.0, 20000, 1));
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.label, DistributionLabel::Indeterminate);
    EXPECT_EQ(to_string(c.label), "indeterminate");
    EXPECT_EQ(to_string(DistributionLabel::DoublePeaked), "double-peaked");
}

TEST(Damping, LimitsAndErrors) {
    EXPECT_NEAR(damping(1.0, 1e-3, 1), 1.0, 1e-15);
    EXPECT_NEAR(damping(1.0, 1e-3, 2), 1.0, 1e-15);
    EXPECT_NEAR(damping(1e-3, 1.0, 1), 0.5e-6, 1e-12);
    EXPECT_NEAR(damping(0.7, 0.3, 1), 1.0 - 1.0 / std::cosh(0.7 / 0.3), 1e-15);
    EXPECT_NEAR(damping(0.7, 0.3, 2), std::pow(std::tanh(0.7 / 0.3), 2), 1e-15);
    EXPECT_THROW((void)damping(1.0, 0.0, 1), ValidationError);
    EXPECT_THROW((void)damping(1.0, 1.0, 3), ValidationError);
}

TEST(Bell, BandsAndErrors) {
    EXPECT_DOUBLE_EQ(ising_band(0.9).lo, 0.1);
    EXPECT_DOUBLE_EQ(ising_band(0.9).hi, 1.9);
    EXPECT_DOUBLE_EQ(aniso_band(-0.2).lo, 0.2);
    EXPECT_THROW((void)ising_band(1.0), ValidationError);
    EXPECT_THROW((void)ising_band(0.0), ValidationError);
    EXPECT_THROW((void)aniso_band(0.0), ValidationError);
    EXPECT_THROW((void)aniso_band(1.0), ValidationError);
    EXPECT_THROW((void)bell_ising(0.05, 0.9, 0.01), ValidationError);
    EXPECT_NEAR(bell_ising(0.1, 0.9, 0.01), 0.0, 1e-15);
}

TEST(Bell, IsingCurveMatchesModeTableForSmallQuench) {
    QuenchParams p;
    p.length = 200;
    p.h0 = 0.9;
    p.h1 = 0.9 + 1e-5;
    p.zero_temperature = true;
    for (const auto& m : ModeTable(p)) {
        const double bell = bell_ising(m.pre.lambda, p.h0, p.h1 - p.h0);
        EXPECT_NEAR(bell, m.alpha, 1e-3 * m.alpha + 1e-22);
    }
}

TEST(Bell, AnisotropyCurveMatchesModeTableForSmallQuench) {
    QuenchParams p;
    p.length = 200;
    p.gamma0 = 0.2;
    p.gamma1 = 0.2 + 1e-5;
    p.zero_temperature = true;
    for (const auto& m : ModeTable(p)) {
        // The published curve carries 1 / (1 - gamma0^2) where the exact small-quench
        // limit has its square; the constant does not move the inflection point.
        const double g2 = p.gamma0 * p.gamma0;
        const double bell = bell_aniso(m.pre.lambda, p.gamma0, p.gamma1 - p.gamma0) / (1.0 - g2);
        EXPECT_NEAR(bell, m.alpha, 1e-3 * m.alpha + 1e-22);
    }
}

TEST(Bell, InflectionMatchesClosedForm) {
    for (double h0 : {0.9, 0.95, 0.99, 1.05, 1.2}) {
        const Band b = ising_band(h0);
        EXPECT_NEAR(ising_inflection_width(h0) / ref::bell_inflection_closed(b.lo, b.hi), 1.0, 1e-6) << h0;
    }
    for (double g0 : {0.3, 0.1, 0.05, 0.01}) {
        EXPECT_NEAR(aniso_inflection_width(g0) / ref::bell_inflection_closed(g0, 1.0), 1.0, 1e-6) << g0;
    }
}

TEST(Bell, InflectionOfKnownFunction) {
    // exp(-x^2/2) has its inflection at x = 1.
    const double x = inflection_point([](double v) { return std::exp(-0.5 * (v - 2.0) * (v - 2.0)); }, 0.0, 6.0);
    EXPECT_NEAR(x, 3.0, 1e-6);
    EXPECT_THROW((void)inflection_point([](double) { return 0.0; }, 1.0, 1.0), ValidationError);
}

TEST(Bell, WidthScalesWithDistanceToCriticality) {
    for (double h0 : {0.9, 0.95, 0.99}) EXPECT_NEAR(ising_inflection_width(h0) / (1.0 - h0), 1.8, 0.18);
    for (double g0 : {0.1, 0.05, 0.01}) EXPECT_NEAR(aniso_inflection_width(g0) / g0, 1.8, 0.18);
}
