#pragma once

#include <span>
#include <vector>

#include "lecho/model.hpp"

namespace lecho {

/// 1 / Tr[rho^2] of the initial Gibbs state.
struct EffectiveDimension {
    double d_eff = 1.0;
    double purity = 1.0;
    double log_d_eff = 0.0;  ///< finite even when d_eff overflows
};

struct EchoBounds {
    double lower = 1.0;  ///< d_eff * L_F(t)
    double upper = 1.0;  ///< L_F(t) + 1 - 1/d_eff
};

struct EchoPoint {
    double t = 0.0;
    double le = 1.0;
    double lef = 1.0;
    double lower = 1.0;
    double upper = 1.0;
};

/// Tables with more modes than this are reduced as sums of logarithms.
inline constexpr std::size_t kLogSpaceModeThreshold = 32;

/// Uhlmann fidelity between the initial Gibbs state and its image after time t
/// under the post-quench Hamiltonian (exact product over modes).
[[nodiscard]] double loschmidt(const ModeTable& table, double t);
[[nodiscard]] double log_loschmidt(const ModeTable& table, double t);
/// 1 - L(t) without cancellation for small t.
[[nodiscard]] double one_minus_loschmidt(const ModeTable& table, double t);

/// Hilbert-Schmidt overlap Tr[rho(t) rho].
[[nodiscard]] double linearized(const ModeTable& table, double t);
[[nodiscard]] double log_linearized(const ModeTable& table, double t);

[[nodiscard]] EffectiveDimension effective_dimension(const ModeTable& table);

[[nodiscard]] EchoBounds bounds(const ModeTable& table, double t);

[[nodiscard]] EchoPoint echo_point(const ModeTable& table, double t);

/// Evaluates echo_point on every time; parallel over times, output order fixed.
[[nodiscard]] std::vector<EchoPoint> echo_series(const ModeTable& table, std::span<const double> times);

/// Leading coefficient A of 1 - L(t) = A t^2 + O(t^4): sum_k (1 - 1/c_k) alpha_k Lambda_k^2.
[[nodiscard]] double short_time_coefficient(const ModeTable& table);

}  // namespace lecho
