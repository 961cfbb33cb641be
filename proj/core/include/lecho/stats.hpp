#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "lecho/model.hpp"

namespace lecho {

/// Oscillation amplitudes of Z(t) = ln L(t) to second order in the quench:
/// Z(t) ~ Zbar + sum_k a_k cos(omega_k t).
struct WeightSpectrum {
    std::vector<double> k;
    std::vector<double> a;         ///< (1 - 1/c) x / 2
    std::vector<double> a_f;       ///< (1 - 1/c^2) x / 2, linearized echo
    std::vector<double> omega;     ///< 2 Lambda_post
    std::vector<double> damping1;  ///< 1 - 1/c_k
    std::vector<double> damping2;  ///< 1 - 1/c_k^2
    /// x = dtheta^2 when set, else sin^2(dtheta).
    bool second_order = false;

    [[nodiscard]] std::size_t size() const { return a.size(); }
    /// Second-order mean of Z: -sum a_k.
    [[nodiscard]] double zbar() const;
    [[nodiscard]] double zbar_f() const;
    /// Variance of Z: (1/2) sum a_k^2.
    [[nodiscard]] double kappa2() const;
};

[[nodiscard]] WeightSpectrum weights(const ModeTable& table, bool use_second_order = false);

/// Uniform observation times on [0, tau] and ln L at each of them.
struct SampleSet {
    double tau = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<double> z;
    double z_mean = 0.0;
};

/// Draws n times sequentially from a 64-bit Mersenne Twister seeded with seed,
/// mapping each output to [0, 1) via its top 53 bits.
[[nodiscard]] std::vector<double> uniform_times(double tau, std::size_t n, std::uint64_t seed);

/// Exact ln L(t) at seeded uniform times; bit-identical for any thread count.
[[nodiscard]] SampleSet sample_logle(const ModeTable& table, double tau, std::size_t n_samples, std::uint64_t seed);

/// Default horizon 100 L^2.
[[nodiscard]] inline double default_tau(int length, double factor = 100.0) {
    return factor * static_cast<double>(length) * static_cast<double>(length);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};
[[nodiscard]] Moments sample_moments(std::span<const double> values);

struct Histogram {
    double lo = 0.0;
    double width = 1.0;
    std::vector<std::size_t> counts;

    [[nodiscard]] std::size_t size() const { return counts.size(); }
    [[nodiscard]] double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width; }
    /// Probability density in bin i.
    [[nodiscard]] double density(std::size_t i, std::size_t total) const;
};

[[nodiscard]] std::size_t freedman_diaconis_bins(std::span<const double> values);
/// Equal-width bins over [min, max]; bins == 0 picks the Freedman-Diaconis count.
[[nodiscard]] Histogram histogram(std::span<const double> values, std::size_t bins);

struct Peak {
    std::size_t bin = 0;
    double location = 0.0;
    double height = 0.0;      ///< smoothed count
    double prominence = 0.0;  ///< fraction of the largest smoothed count
};

struct PeakOptions {
    std::size_t window = 5;
    double min_prominence = 0.05;
};

[[nodiscard]] std::vector<double> moving_average(std::span<const std::size_t> counts, std::size_t window);
/// Local maxima of the smoothed histogram whose topographic prominence is at
/// least min_prominence of the highest bin, most prominent first.
[[nodiscard]] std::vector<Peak> find_peaks(const Histogram& hist, const PeakOptions& options = {});

/// prod_k J0(|lambda a_k|) on each lambda.
[[nodiscard]] std::vector<double> char_fn(const WeightSpectrum& spectrum, std::span<const double> lambdas);
/// Sample mean of exp(i lambda (z - center)).
[[nodiscard]] std::vector<std::complex<double>> empirical_char_fn(std::span<const double> z, double center,
                                                                  std::span<const double> lambdas);

enum class DistributionLabel { DoublePeaked, MergedSinglePeak, Gaussian, Indeterminate };
[[nodiscard]] std::string_view to_string(DistributionLabel label);

struct ClassifierConfig {
    /// Two largest weights must carry more than this share of sum a_k for the
    /// distribution to count as dominated by few modes.
    double dominance_threshold = 0.6;
    /// |a1 - a2| must exceed this many sigma_rest for the peaks to separate.
    double separation_factor = 3.0;
    std::size_t bins = 200;
    PeakOptions peaks;
    std::size_t min_samples_for_histogram = 10000;
};

struct Classification {
    DistributionLabel label = DistributionLabel::Indeterminate;
    DistributionLabel weight_label = DistributionLabel::Indeterminate;
    double dominance = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double sigma_rest = 0.0;
    double zbar = 0.0;
    double predicted_low = 0.0;   ///< zbar - |a1 - a2|
    double predicted_high = 0.0;  ///< zbar + |a1 - a2|
    double kappa2 = 0.0;
    bool degenerate = false;      ///< all weights vanish; Z has zero variance
    bool histogram_checked = false;
    std::vector<Peak> peaks;
};

[[nodiscard]] Classification classify(const WeightSpectrum& spectrum, const SampleSet& samples,
                                      const ClassifierConfig& config = {});

/// 1 - cosh(omega / T)^(-m), m in {1, 2}.
[[nodiscard]] double damping(double omega, double temperature, int m);

struct Band {
    double lo;
    double hi;
};
[[nodiscard]] Band ising_band(double h0);
[[nodiscard]] Band aniso_band(double gamma0);

/// Continuum sin^2(dtheta) near the Ising line (gamma = 1) as a function of the
/// pre-quench single-particle energy.
[[nodiscard]] double bell_ising(double omega, double h0, double dh);
/// Same near the anisotropy line at h = 0, in its published normalization:
/// the exact small-quench limit is this times 1 / (1 - gamma0^2).
[[nodiscard]] double bell_aniso(double omega, double gamma0, double dgamma);

/// Location of the inflection point to the right of the maximum of a
/// bell-shaped f on [lo, hi], found numerically.
[[nodiscard]] double inflection_point(const std::function<double(double)>& f, double lo, double hi);
[[nodiscard]] double ising_inflection_width(double h0);
[[nodiscard]] double aniso_inflection_width(double gamma0);

}  // namespace lecho
