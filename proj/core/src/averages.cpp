#include "lecho/averages.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lecho/echo.hpp"
#include "lecho/error.hpp"
#include "lecho/special.hpp"

namespace lecho {
namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// Mean of sqrt(1 - m sin^2) and its cube over a period.
struct RootMoments {
    double r1, r2, r3, r4;
};

RootMoments root_moments(double m) {
    const auto [k, e] = elliptic_ke(m);
    // (1 - m) K(m) -> 0 as m -> 1
    const double tail = (m == 1.0) ? 0.0 : (1.0 - m) * k;
    return {
        .r1 = kTwoOverPi * e,
        .r2 = 1.0 - 0.5 * m,
        .r3 = kTwoOverPi * (2.0 * (2.0 - m) * e - tail) / 3.0,
        .r4 = 1.0 - m + 0.375 * m * m,
    };
}

double reduce_product(std::span<const double> factors) {
    if (factors.size() > kLogSpaceModeThreshold) {
        double acc = 0.0;
        for (double f : factors) {
            acc += std::log(f);
        }
        return std::exp(acc);
    }
    double prod = 1.0;
    for (double f : factors) {
        prod *= f;
    }
    return prod;
}

}  // namespace

ModeMoments mode_moments_series(double inv_c, double b, const SeriesOptions& options) {
    const double u = inv_c;
    const double pref = 2.0 * u / ((1.0 + u) * (1.0 + u));
    std::vector<double> h(static_cast<std::size_t>(options.max_terms) + 1, 0.0);

    double binom_half = 1.0;  // binom(1/2, m)
    double b_pow = 1.0;
    double weight = 1.0;      // 4^-m binom(2m, m)
    double g1 = 0.0;
    double cross = 0.0;       // sum_m w_m sum_n h_n h_{m-n}
    for (int m = 1; m <= options.max_terms; ++m) {
        binom_half *= (0.5 - (m - 1)) / m;
        b_pow *= b;
        weight *= (2.0 * m - 1.0) / (2.0 * m);
        const auto mi = static_cast<std::size_t>(m);
        h[mi] = (m == 1) ? b / (1.0 + u) : pref * b_pow * binom_half;
        double conv = 0.0;
        for (std::size_t n = 1; n < mi; ++n) {
            conv += h[n] * h[mi - n];
        }
        const double t1 = weight * h[mi];
        const double t2 = weight * conv;
        g1 += t1;
        cross += t2;
        const bool small1 = std::abs(t1) <= options.rel_tol * std::abs(g1);
        const bool small2 = std::abs(t2) <= options.rel_tol * std::abs(2.0 * g1 + cross);
        if (m >= 3 && small1 && small2) {
            return {.g1 = g1, .g2 = 2.0 * g1 + cross, .variance = cross - g1 * g1, .terms = m};
        }
    }
    throw NonConvergenceError("mode series did not converge within " + std::to_string(options.max_terms) +
                              " terms (b = " + std::to_string(b) + ")");
}

ModeMoments mode_moments_closed(double inv_c, double b) {
    const double u = inv_c;
    const auto r = root_moments(-b);
    const double s = 1.0 + u;
    const double s2 = s * s;
    const double mean = (u * u + 2.0 * u * r.r1 + r.r2) / s2;
    const double u2 = u * u;
    const double mean_sq = (u2 * u2 + 4.0 * u2 * u * r.r1 + 6.0 * u2 * r.r2 + 4.0 * u * r.r3 + r.r4) / (s2 * s2);
    return {.g1 = mean - 1.0, .g2 = mean_sq - 1.0, .variance = mean_sq - mean * mean, .terms = 0};
}

double avg_loschmidt(const ModeTable& table) {
    std::vector<double> factors;
    factors.reserve(table.size());
    for (const auto& m : table) {
        const double u = m.thermal.inv_c;
        const double g = 2.0 * u / ((1.0 + u) * (1.0 + u)) * (kTwoOverPi * elliptic_e(-m.b) - 0.25 * m.b - 1.0);
        factors.push_back(1.0 - 0.5 * m.thermal.one_minus_inv_c * m.alpha + g);
    }
    return reduce_product(factors);
}

double avg_loschmidt_series(const ModeTable& table, const SeriesOptions& options) {
    std::vector<double> factors;
    factors.reserve(table.size());
    for (const auto& m : table) {
        try {
            factors.push_back(1.0 + mode_moments_series(m.thermal.inv_c, m.b, options).g1);
        } catch (const NonConvergenceError&) {
            if (!options.closed_form_fallback) {
                throw;
            }
            factors.push_back(1.0 + mode_moments_closed(m.thermal.inv_c, m.b).g1);
        }
    }
    return reduce_product(factors);
}

double avg_linearized(const ModeTable& table) {
    std::vector<double> factors;
    factors.reserve(table.size());
    for (const auto& m : table) {
        const double u = m.thermal.inv_c;
        factors.push_back((1.0 - 0.5 * m.thermal.one_minus_inv_c2 * m.alpha) / ((1.0 + u) * (1.0 + u)));
    }
    return reduce_product(factors);
}

namespace {

// mean(L^2) - mean(L)^2 = mean(L)^2 * (prod(1 + v_k / (1 + G1_k)^2) - 1), summed in logs.
VarianceResult combine(const std::vector<ModeMoments>& per_mode, int fallbacks) {
    double log_mean = 0.0;
    double log_ratio = 0.0;
    for (const auto& mm : per_mode) {
        const double f = 1.0 + mm.g1;
        log_mean += std::log(f);
        log_ratio += std::log1p(mm.variance / (f * f));
    }
    const double mean_sq_of_mean = std::exp(2.0 * log_mean);
    return {
        .variance = mean_sq_of_mean * std::expm1(log_ratio),
        .mean = std::exp(log_mean),
        .mean_square = std::exp(2.0 * log_mean + log_ratio),
        .fallback_modes = fallbacks,
    };
}

}  // namespace

VarianceResult variance_details(const ModeTable& table, const SeriesOptions& options) {
    std::vector<ModeMoments> per_mode;
    per_mode.reserve(table.size());
    int fallbacks = 0;
    for (const auto& m : table) {
        try {
            per_mode.push_back(mode_moments_series(m.thermal.inv_c, m.b, options));
        } catch (const NonConvergenceError&) {
            if (!options.closed_form_fallback) {
                throw;
            }
            per_mode.push_back(mode_moments_closed(m.thermal.inv_c, m.b));
            ++fallbacks;
        }
    }
    return combine(per_mode, fallbacks);
}

double variance_le(const ModeTable& table, const SeriesOptions& options) {
    return variance_details(table, options).variance;
}

double variance_le_closed_form(const ModeTable& table) {
    std::vector<ModeMoments> per_mode;
    per_mode.reserve(table.size());
    for (const auto& m : table) {
        per_mode.push_back(mode_moments_closed(m.thermal.inv_c, m.b));
    }
    return combine(per_mode, 0).variance;
}

double smallquench_variance(const ModeTable& table) {
    double acc = 0.0;
    for (const auto& m : table) {
        const double d = m.thermal.one_minus_inv_c;
        const double th2 = m.dtheta * m.dtheta;
        acc += d * d * th2 * th2;
    }
    return acc / 8.0;
}

AverageReport average_report(const ModeTable& table) {
    const auto var = variance_details(table);
    const double lef = avg_linearized(table);
    return {
        .mean_le = avg_loschmidt(table),
        .mean_lef = lef,
        .var_le = var.variance,
        .smallquench_var = smallquench_variance(table),
        .equilibrium_purity = lef,
        .d_eff = effective_dimension(table).d_eff,
        .series_fallback_modes = var.fallback_modes,
    };
}

}  // namespace lecho
