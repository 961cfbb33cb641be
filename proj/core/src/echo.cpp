#include "lecho/echo.hpp"

#include <cassert>
#include <cmath>

#include "lecho/parallel.hpp"

namespace lecho {
namespace {

// tanh^2(beta Lambda0) * alpha * sin^2(Lambda1 t): the depletion entering both echoes.
double depletion(const ModeEntry& m, double t) {
    const double s = std::sin(m.post.lambda * t);
    return m.thermal.one_minus_inv_c2 * m.alpha * s * s;
}

// Square root of c^2 - (c^2-1) alpha sin^2, divided by c. The argument is >= 1
// before the division, hence >= 1/c^2 after it.
double scaled_root(const ModeEntry& m, double q) {
    const double u = m.thermal.inv_c;
    double arg = 1.0 - q;
    const double floor = u * u;
    assert(arg >= floor - 1e-15);
    if (arg < floor) {
        arg = floor;
    }
    return std::sqrt(arg);
}

// log of one squared factor [(1 + sqrt(...)) / (1 + c)]^2.
double log_mode_factor(const ModeEntry& m, double t) {
    const double q = depletion(m, t);
    const double u = m.thermal.inv_c;
    const double r = scaled_root(m, q);
    return 2.0 * std::log1p(-q / ((1.0 + r) * (1.0 + u)));
}

double mode_factor(const ModeEntry& m, double t) {
    const double q = depletion(m, t);
    const double u = m.thermal.inv_c;
    const double f = (u + scaled_root(m, q)) / (1.0 + u);
    return f * f;
}

bool use_log_space(const ModeTable& table) { return table.size() > kLogSpaceModeThreshold; }

double log_lower_bound(const ModeTable& table, double t) {
    double acc = 0.0;
    for (const auto& m : table) {
        acc += std::log1p(-depletion(m, t));
    }
    return acc;
}

}  // namespace

double log_loschmidt(const ModeTable& table, double t) {
    double acc = 0.0;
    for (const auto& m : table) {
        acc += log_mode_factor(m, t);
    }
    return acc;
}

double loschmidt(const ModeTable& table, double t) {
    if (use_log_space(table)) {
        return std::exp(log_loschmidt(table, t));
    }
    double prod = 1.0;
    for (const auto& m : table) {
        prod *= mode_factor(m, t);
    }
    return prod;
}

double one_minus_loschmidt(const ModeTable& table, double t) { return -std::expm1(log_loschmidt(table, t)); }

EffectiveDimension effective_dimension(const ModeTable& table) {
    double log_d = 0.0;
    for (const auto& m : table) {
        log_d += 2.0 * std::log1p(m.thermal.inv_c);
    }
    return {.d_eff = std::exp(log_d), .purity = std::exp(-log_d), .log_d_eff = log_d};
}

double log_linearized(const ModeTable& table, double t) {
    return log_lower_bound(table, t) - effective_dimension(table).log_d_eff;
}

double linearized(const ModeTable& table, double t) {
    if (use_log_space(table)) {
        return std::exp(log_linearized(table, t));
    }
    double prod = 1.0;
    for (const auto& m : table) {
        const double u = m.thermal.inv_c;
        const double purity_k = 1.0 / ((1.0 + u) * (1.0 + u));
        prod *= purity_k * (1.0 - depletion(m, t));
    }
    return prod;
}

EchoBounds bounds(const ModeTable& table, double t) {
    const double log_low = log_lower_bound(table, t);
    const double log_d = effective_dimension(table).log_d_eff;
    return {.lower = std::exp(log_low), .upper = std::exp(log_low - log_d) - std::expm1(-log_d)};
}

EchoPoint echo_point(const ModeTable& table, double t) {
    const auto bd = bounds(table, t);
    return {.t = t, .le = loschmidt(table, t), .lef = linearized(table, t), .lower = bd.lower, .upper = bd.upper};
}

std::vector<EchoPoint> echo_series(const ModeTable& table, std::span<const double> times) {
    std::vector<EchoPoint> out(times.size());
    parallel_for(times.size(), [&](std::size_t i) { out[i] = echo_point(table, times[i]); });
    return out;
}

double short_time_coefficient(const ModeTable& table) {
    double a = 0.0;
    for (const auto& m : table) {
        a += m.thermal.one_minus_inv_c * m.alpha * m.post.lambda * m.post.lambda;
    }
    return a;
}

}  // namespace lecho
