#include "lecho/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lecho/error.hpp"

namespace lecho {

void QuenchParams::validate() const {
    if (length < 2 || length % 2 != 0) {
        throw ValidationError("chain length must be an even integer >= 2, got " + std::to_string(length));
    }
    if (!std::isfinite(h0) || !std::isfinite(h1) || !std::isfinite(gamma0) || !std::isfinite(gamma1)) {
        throw ValidationError("fields and anisotropies must be finite");
    }
    if (!zero_temperature && !(beta > 0.0 && std::isfinite(beta))) {
        throw ValidationError("beta must be positive and finite (use the zero-temperature flag for T = 0)");
    }
}

ThermalFactors thermal_factors(double x) {
    if (!(x >= 0.0)) {
        throw ValidationError("thermal_factors: beta*Lambda must be >= 0");
    }
    const double e = std::exp(-x);
    const double one_minus_e = -std::expm1(-x);
    const double denom = 1.0 + e * e;
    const double t = std::tanh(x);
    return {
        .c = std::cosh(x),
        .inv_c = 2.0 * e / denom,
        .one_minus_inv_c = one_minus_e * one_minus_e / denom,
        .one_minus_inv_c2 = t * t,
    };
}

ThermalFactors zero_temperature_factors() {
    return {.c = std::numeric_limits<double>::infinity(), .inv_c = 0.0, .one_minus_inv_c = 1.0, .one_minus_inv_c2 = 1.0};
}

std::vector<double> momenta(int length) {
    if (length < 2 || length % 2 != 0) {
        throw ValidationError("momenta: length must be an even integer >= 2, got " + std::to_string(length));
    }
    std::vector<double> ks(static_cast<std::size_t>(length / 2));
    for (int n = 0; n < length / 2; ++n) {
        ks[static_cast<std::size_t>(n)] = (2.0 * n + 1.0) * std::numbers::pi / length;
    }
    return ks;
}

ModeQuantities dispersion(double h, double gamma, double k) {
    ModeQuantities m;
    m.k = k;
    m.eps = std::cos(k) + h;
    m.delta = gamma * std::sin(k);
    m.lambda = std::hypot(m.eps, m.delta);
    m.theta = std::atan2(m.delta, m.eps);
    return m;
}

ModeTable::ModeTable(const QuenchParams& params) : params_(params) {
    params_.validate();
    const auto ks = momenta(params_.length);
    modes_.reserve(ks.size());
    for (double k : ks) {
        ModeEntry e;
        e.pre = dispersion(params_.h0, params_.gamma0, k);
        e.post = dispersion(params_.h1, params_.gamma1, k);
        e.dtheta = e.post.theta - e.pre.theta;
        const double s = std::sin(e.dtheta);
        e.alpha = s * s;
        e.thermal = params_.zero_temperature ? zero_temperature_factors()
                                             : thermal_factors(params_.beta * e.pre.lambda);
        e.b = -e.thermal.one_minus_inv_c2 * e.alpha;
        e.omega = 2.0 * e.post.lambda;
        modes_.push_back(e);
    }
}

ModeTable mode_table(const QuenchParams& params) { return ModeTable(params); }

double sin2_dtheta_explicit(const QuenchParams& params, double k) {
    const double l0 = dispersion(params.h0, params.gamma0, k).lambda;
    const double l1 = dispersion(params.h1, params.gamma1, k).lambda;
    // Rounding in sin k leaves a residue near 1e-16 where the gap closes exactly.
    const double floor0 = 1e-14 * (1.0 + std::abs(params.h0) + std::abs(params.gamma0));
    const double floor1 = 1e-14 * (1.0 + std::abs(params.h1) + std::abs(params.gamma1));
    const double prod = l0 * l1;
    if (l0 <= floor0 || l1 <= floor1) {
        throw DegenerateModeError("sin2_dtheta_explicit: gapless mode at k = " + std::to_string(k));
    }
    const double sk = std::sin(k);
    const double bracket =
        (params.gamma1 - params.gamma0) * std::cos(k) + (params.gamma1 * params.h0 - params.gamma0 * params.h1);
    return sk * sk * bracket * bracket / (prod * prod);
}

}  // namespace lecho
