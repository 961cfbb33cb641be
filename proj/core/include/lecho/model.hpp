#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lecho {

/// Quench of the XY chain from (h0, gamma0) to (h1, gamma1) starting from the
/// Gibbs state of the pre-quench Hamiltonian. Energies are in units of J = 1.
struct QuenchParams {
    double h0 = 0.0;
    double h1 = 0.0;
    double gamma0 = 1.0;
    double gamma1 = 1.0;
    double beta = 1.0;
    int length = 2;
    /// Pure ground state; beta is ignored and all thermal ratios take their
    /// beta -> infinity limits.
    bool zero_temperature = false;

    /// Throws ValidationError unless length is even and >= 2 and beta is
    /// positive and finite (or zero_temperature is set).
    void validate() const;

    [[nodiscard]] double temperature() const { return zero_temperature ? 0.0 : 1.0 / beta; }
};

struct ModeQuantities {
    double k = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    double lambda = 0.0;
    double theta = 0.0;
};

/// Thermal ratios of c = cosh(x), x = beta * Lambda. Every field is computed
/// from exp(-x), so nothing overflows even when c itself does.
struct ThermalFactors {
    double c = 1.0;                 ///< cosh(x); +inf at T = 0 or on overflow
    double inv_c = 1.0;             ///< 1 / c
    double one_minus_inv_c = 0.0;   ///< 1 - 1/c
    double one_minus_inv_c2 = 0.0;  ///< 1 - 1/c^2 = tanh^2(x)
};

[[nodiscard]] ThermalFactors thermal_factors(double x);
[[nodiscard]] ThermalFactors zero_temperature_factors();

/// One momentum k > 0, paired pre- and post-quench quantities.
struct ModeEntry {
    ModeQuantities pre;
    ModeQuantities post;
    double dtheta = 0.0;  ///< theta_post - theta_pre
    double alpha = 0.0;   ///< sin^2(dtheta)
    ThermalFactors thermal;
    double b = 0.0;       ///< -(1 - 1/c^2) alpha, in (-1, 0]
    double omega = 0.0;   ///< 2 Lambda_post

    [[nodiscard]] double c() const { return thermal.c; }
};

/// Anti-periodic momenta k = (2n+1) pi / L, n = 0 .. L/2-1.
[[nodiscard]] std::vector<double> momenta(int length);

/// eps = cos k + h, delta = gamma sin k, theta = atan2(delta, eps).
[[nodiscard]] ModeQuantities dispersion(double h, double gamma, double k);

class ModeTable {
public:
    explicit ModeTable(const QuenchParams& params);

    [[nodiscard]] const QuenchParams& params() const { return params_; }
    [[nodiscard]] std::span<const ModeEntry> modes() const { return modes_; }
    [[nodiscard]] std::size_t size() const { return modes_.size(); }
    [[nodiscard]] const ModeEntry& operator[](std::size_t i) const { return modes_[i]; }
    [[nodiscard]] auto begin() const { return modes_.begin(); }
    [[nodiscard]] auto end() const { return modes_.end(); }

private:
    QuenchParams params_;
    std::vector<ModeEntry> modes_;
};

[[nodiscard]] ModeTable mode_table(const QuenchParams& params);

/// sin^2(theta_1 - theta_0) written directly in the Hamiltonian parameters.
/// Throws DegenerateModeError when Lambda_pre * Lambda_post == 0.
[[nodiscard]] double sin2_dtheta_explicit(const QuenchParams& params, double k);

}  // namespace lecho
