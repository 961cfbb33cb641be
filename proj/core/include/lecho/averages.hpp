#pragma once

#include "lecho/model.hpp"

namespace lecho {

/// Infinite-time statistics of the echo, assuming rationally independent
/// single-particle energies.
struct AverageReport {
    double mean_le = 1.0;             ///< time average of L(t)
    double mean_lef = 1.0;            ///< time average of L_F(t)
    double var_le = 0.0;              ///< mean of L^2 minus squared mean
    double smallquench_var = 0.0;     ///< (1/8) sum (1 - 1/c)^2 dtheta^4
    double equilibrium_purity = 1.0;  ///< Tr[rhobar^2], identical to mean_lef
    double d_eff = 1.0;
    int series_fallback_modes = 0;
};

/// Controls the per-mode power series in sin^2(Lambda t).
struct SeriesOptions {
    int max_terms = 200;
    double rel_tol = 1e-15;
    /// When a mode's series has not met rel_tol within max_terms, evaluate that
    /// mode through complete elliptic integrals instead of throwing.
    bool closed_form_fallback = true;
};

/// Time averages of one mode factor f = [(1 + c sqrt(1 + b s^2)) / (1 + c)]^2.
struct ModeMoments {
    double g1 = 0.0;        ///< mean(f) - 1
    double g2 = 0.0;        ///< mean(f^2) - 1
    double variance = 0.0;  ///< mean(f^2) - mean(f)^2
    int terms = 0;          ///< series terms used (0 for the closed form)
};

/// Series in h^(m) with sin^{2m} averages 4^-m binom(2m, m). Throws
/// NonConvergenceError when rel_tol is not reached within max_terms.
[[nodiscard]] ModeMoments mode_moments_series(double inv_c, double b, const SeriesOptions& options = {});
/// Same moments through E(-b) and K(-b).
[[nodiscard]] ModeMoments mode_moments_closed(double inv_c, double b);

/// Product of 1 - (1 - 1/c) alpha / 2 + g_k with the elliptic-integral g_k.
[[nodiscard]] double avg_loschmidt(const ModeTable& table);
/// Product of 1 + G_k^(1) summed as a power series.
[[nodiscard]] double avg_loschmidt_series(const ModeTable& table, const SeriesOptions& options = {});

[[nodiscard]] double avg_linearized(const ModeTable& table);

struct VarianceResult {
    double variance = 0.0;
    double mean = 1.0;
    double mean_square = 1.0;
    int fallback_modes = 0;
};

[[nodiscard]] VarianceResult variance_details(const ModeTable& table, const SeriesOptions& options = {});
[[nodiscard]] double variance_le(const ModeTable& table, const SeriesOptions& options = {});
[[nodiscard]] double variance_le_closed_form(const ModeTable& table);

/// Lowest-order variance for small quenches at fixed size.
[[nodiscard]] double smallquench_variance(const ModeTable& table);

[[nodiscard]] AverageReport average_report(const ModeTable& table);

}  // namespace lecho
