#include "lecho/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "lecho/echo.hpp"
#include "lecho/error.hpp"
#include "lecho/parallel.hpp"
#include "lecho/special.hpp"

namespace lecho {

double WeightSpectrum::zbar() const { return -std::accumulate(a.begin(), a.end(), 0.0); }

double WeightSpectrum::zbar_f() const { return -std::accumulate(a_f.begin(), a_f.end(), 0.0); }

double WeightSpectrum::kappa2() const {
    double s = 0.0;
    for (double x : a) s += x * x;
    return 0.5 * s;
}

WeightSpectrum weights(const ModeTable& table, bool use_second_order) {
    WeightSpectrum w;
    w.second_order = use_second_order;
    const std::size_t n = table.size();
    w.k.reserve(n);
    w.a.reserve(n);
    w.a_f.reserve(n);
    w.omega.reserve(n);
    w.damping1.reserve(n);
    w.damping2.reserve(n);
    for (const auto& m : table) {
        const double x = use_second_order ? m.dtheta * m.dtheta : m.alpha;
        w.k.push_back(m.pre.k);
        w.a.push_back(0.5 * m.thermal.one_minus_inv_c * x);
        w.a_f.push_back(0.5 * m.thermal.one_minus_inv_c2 * x);
        w.omega.push_back(m.omega);
        w.damping1.push_back(m.thermal.one_minus_inv_c);
        w.damping2.push_back(m.thermal.one_minus_inv_c2);
    }
    return w;
}

std::vector<double> uniform_times(double tau, std::size_t n, std::uint64_t seed) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("sampling horizon tau must be positive and finite");
    std::mt19937_64 rng(seed);
    std::vector<double> t(n);
    constexpr double scale = 0x1.0p-53;
    for (auto& x : t) x = tau * (static_cast<double>(rng() >> 11) * scale);
    return t;
}

SampleSet sample_logle(const ModeTable& table, double tau, std::size_t n_samples, std::uint64_t seed) {
    SampleSet s;
    s.tau = tau;
    s.seed = seed;
    s.times = uniform_times(tau, n_samples, seed);
    s.z.assign(n_samples, 0.0);
    parallel_for(n_samples, [&](std::size_t i) { s.z[i] = log_loschmidt(table, s.times[i]); });
    if (n_samples > 0) s.z_mean = std::accumulate(s.z.begin(), s.z.end(), 0.0) / static_cast<double>(n_samples);
    return s;
}

Moments sample_moments(std::span<const double> v) {
    Moments m;
    const auto n = static_cast<double>(v.size());
    if (v.empty()) return m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double x : v) {
        const double d = x - m.mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    if (v.size() > 1) m.variance = s2 / (n - 1.0);
    const double var_pop = s2 / n;
    if (var_pop > 0.0) {
        m.skewness = (s3 / n) / std::pow(var_pop, 1.5);
        m.excess_kurtosis = (s4 / n) / (var_pop * var_pop) - 3.0;
    }
    return m;
}

double Histogram::density(std::size_t i, std::size_t total) const {
    if (total == 0) return 0.0;
    return static_cast<double>(counts.at(i)) / (static_cast<double>(total) * width);
}

namespace {

double quantile_sorted(const std::vector<double>& s, double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    if (i + 1 >= s.size()) return s.back();
    return s[i] + f * (s[i + 1] - s[i]);
}

constexpr std::size_t kMaxAutoBins = 10000;
constexpr std::size_t kFallbackBins = 200;

}  // namespace

std::size_t freedman_diaconis_bins(std::span<const double> values) {
    if (values.size() < 2) return 1;
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    const double range = s.back() - s.front();
    if (!(range > 0.0)) return 1;
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    if (!(iqr > 0.0)) return kFallbackBins;
    const double h = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    const double nb = std::ceil(range / h);
    return std::clamp<std::size_t>(static_cast<std::size_t>(nb), 1, kMaxAutoBins);
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty()) throw ValidationError("histogram of an empty sample");
    for (double x : values)
        if (!std::isfinite(x)) throw ValidationError("histogram input contains a non-finite value");
    if (bins == 0) bins = freedman_diaconis_bins(values);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Histogram h;
    h.lo = *mn;
    const double range = *mx - *mn;
    if (!(range > 0.0)) {
        h.width = 1.0;
        h.lo = *mn - 0.5;
        h.counts.assign(1, values.size());
        return h;
    }
    h.width = range / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double x : values) {
        auto i = static_cast<std::size_t>((x - h.lo) / h.width);
        if (i >= bins) i = bins - 1;
        ++h.counts[i];
    }
    return h;
}

std::vector<double> moving_average(std::span<const std::size_t> counts, std::size_t window) {
    const std::size_t n = counts.size();
    std::vector<double> out(n, 0.0);
    if (window <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(counts[i]);
        return out;
    }
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += static_cast<double>(counts[j]);
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<Peak> find_peaks(const Histogram& hist, const PeakOptions& options) {
    const std::vector<double> y = moving_average(hist.counts, options.window);
    const std::size_t n = y.size();
    std::vector<Peak> peaks;
    if (n == 0) return peaks;
    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(ymax > 0.0)) return peaks;

    for (std::size_t i = 0; i < n; ++i) {
        const bool rises = i == 0 || y[i] > y[i - 1];
        const bool holds = i + 1 == n || y[i] >= y[i + 1];
        if (!rises || !holds) continue;

        // Outside the histogram the density is zero. An equal-height sample to
        // the left ends the walk, one to the right does not, so a flat-topped
        // pair of maxima yields a single prominent peak.
        double left_min = y[i];
        bool left_edge = true;
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] >= y[i]) {
                left_edge = false;
                break;
            }
            left_min = std::min(left_min, y[j]);
        }
        if (left_edge) left_min = 0.0;

        double right_min = y[i];
        bool right_edge = true;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) {
                right_edge = false;
                break;
            }
            right_min = std::min(right_min, y[j]);
        }
        if (right_edge) right_min = 0.0;

        const double prom = (y[i] - std::max(left_min, right_min)) / ymax;
        if (prom >= options.min_prominence) peaks.push_back({i, hist.center(i), y[i], prom});
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.prominence > b.prominence; });
    return peaks;
}

std::vector<double> char_fn(const WeightSpectrum& spectrum, std::span<const double> lambdas) {
    std::vector<double> out(lambdas.size(), 1.0);
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        double p = 1.0;
        for (double a : spectrum.a) p *= bessel_j0(lambdas[j] * a);
        out[j] = p;
    }
    return out;
}

std::vector<std::complex<double>> empirical_char_fn(std::span<const double> z, double center,
                                                    std::span<const double> lambdas) {
    if (z.empty()) throw ValidationError("empirical characteristic function of an empty sample");
    std::vector<std::complex<double>> out(lambdas.size());
    const auto n = static_cast<double>(z.size());
    parallel_for(lambdas.size(), [&](std::size_t j) {
        double re = 0.0, im = 0.0;
        for (double x : z) {
            const double ph = lambdas[j] * (x - center);
            re += std::cos(ph);
            im += std::sin(ph);
        }
        out[j] = {re / n, im / n};
    });
    return out;
}

std::string_view to_string(DistributionLabel label) {
    switch (label) {
        case DistributionLabel::DoublePeaked: return "double-peaked";
        case DistributionLabel::MergedSinglePeak: return "merged-single-peak";
        case DistributionLabel::Gaussian: return "gaussian";
        case DistributionLabel::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

Classification classify(const WeightSpectrum& spectrum, const SampleSet& samples, const ClassifierConfig& config) {
    Classification c;
    c.kappa2 = spectrum.kappa2();
    c.zbar = spectrum.zbar();

    std::vector<double> a(spectrum.a.begin(), spectrum.a.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    const double total = std::accumulate(a.begin(), a.end(), 0.0);
    if (a.empty() || !(total > 0.0)) {
        c.degenerate = true;
        c.predicted_low = c.predicted_high = c.zbar;
        return c;
    }
    c.a1 = a[0];
    c.a2 = a.size() > 1 ? a[1] : 0.0;
    double rest = 0.0;
    for (std::size_t i = 2; i < a.size(); ++i) rest += a[i] * a[i];
    c.sigma_rest = std::sqrt(0.5 * rest);
    c.dominance = (c.a1 + c.a2) / total;
    const double gap = c.a1 - c.a2;
    c.predicted_low = c.zbar - gap;
    c.predicted_high = c.zbar + gap;

    if (c.dominance > config.dominance_threshold)
        c.weight_label = gap > config.separation_factor * c.sigma_rest ? DistributionLabel::DoublePeaked
                                                                       : DistributionLabel::MergedSinglePeak;
    else
        c.weight_label = DistributionLabel::Gaussian;
    c.label = c.weight_label;

    if (samples.z.size() >= config.min_samples_for_histogram) {
        c.histogram_checked = true;
        const Histogram h = histogram(samples.z, config.bins);
        c.peaks = find_peaks(h, config.peaks);
        const bool two = c.peaks.size() >= 2;
        const bool agrees = c.weight_label == DistributionLabel::DoublePeaked ? two : c.peaks.size() == 1;
        if (!agrees) c.label = DistributionLabel::Indeterminate;
    }
    return c;
}

double damping(double omega, double temperature, int m) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ValidationError("temperature must be positive");
    if (m != 1 && m != 2) throw ValidationError("damping exponent must be 1 or 2");
    const ThermalFactors f = thermal_factors(std::abs(omega) / temperature);
    return m == 1 ? f.one_minus_inv_c : f.one_minus_inv_c2;
}

Band ising_band(double h0) {
    if (!(h0 > 0.0) || !std::isfinite(h0) || h0 == 1.0)
        throw ValidationError("Ising bell curve needs a finite h0 > 0 away from 1");
    return {std::abs(1.0 - h0), 1.0 + h0};
}

Band aniso_band(double gamma0) {
    if (!(std::abs(gamma0) < 1.0) || gamma0 == 0.0)
        throw ValidationError("anisotropy bell curve needs 0 < |gamma0| < 1");
    return {std::abs(gamma0), 1.0};
}

namespace {

void require_in_band(double omega, Band b) {
    const double slack = 1e-12 * b.hi;
    if (!(omega >= b.lo - slack && omega <= b.hi + slack))
        throw ValidationError("energy " + std::to_string(omega) + " outside the band [" + std::to_string(b.lo) + ", " +
                              std::to_string(b.hi) + "]");
}

}  // namespace

double bell_ising(double omega, double h0, double dh) {
    const Band b = ising_band(h0);
    require_in_band(omega, b);
    const double w2 = omega * omega;
    return (w2 - b.lo * b.lo) * (b.hi * b.hi - w2) * dh * dh / (4.0 * h0 * h0 * w2 * w2);
}

double bell_aniso(double omega, double gamma0, double dgamma) {
    const Band b = aniso_band(gamma0);
    require_in_band(omega, b);
    const double w2 = omega * omega;
    const double g2 = gamma0 * gamma0;
    return (1.0 - w2) * (w2 - g2) * dgamma * dgamma / ((1.0 - g2) * w2 * w2);
}

double inflection_point(const std::function<double(double)>& f, double lo, double hi) {
    if (!(hi > lo)) throw ValidationError("inflection search needs lo < hi");
    // Golden-section search for the maximum.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * hi; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    const double peak = 0.5 * (a + b);

    auto second = [&](double x) {
        const double h = 1e-4 * std::min(x - lo, hi - x);
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    };

    // Bracket the first sign change of f'' to the right of the maximum on a
    // geometric grid; narrow bands near a gap closing sit close to lo.
    constexpr int kScan = 400;
    double left = peak;
    double right = std::numeric_limits<double>::quiet_NaN();
    double prev = peak;
    for (int i = 1; i < kScan; ++i) {
        const double x = peak * std::pow(hi / peak, static_cast<double>(i) / kScan);
        if (second(x) > 0.0) {
            left = prev;
            right = x;
            break;
        }
        prev = x;
    }
    if (std::isnan(right)) throw NonConvergenceError("no inflection point to the right of the maximum");
    for (int it = 0; it < 200 && (right - left) > 1e-13 * right; ++it) {
        const double mid = 0.5 * (left + right);
        (second(mid) > 0.0 ? right : left) = mid;
    }
    return 0.5 * (left + right);
}

double ising_inflection_width(double h0) {
    const Band b = ising_band(h0);
    return inflection_point([&](double w) { return bell_ising(w, h0, 1.0); }, b.lo, b.hi);
}

double aniso_inflection_width(double gamma0) {
    const Band b = aniso_band(gamma0);
    return inflection_point([&](double w) { return bell_aniso(w, gamma0, 1.0); }, b.lo, b.hi);
}

}  // namespace lecho
