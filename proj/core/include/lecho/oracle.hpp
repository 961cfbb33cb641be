#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lecho/model.hpp"

namespace lecho {

using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Largest chain length the dense oracle accepts (Fock dimension 4096).
inline constexpr int kMaxOracleLength = 12;
/// Consecutive-level gaps below this count as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Square complex matrix, optionally flagged Hermitian. The flag is checked on
/// construction: ||M - M^dagger||_max < 1e-12 (relative to max(1, ||M||_max)).
class DenseOperator {
public:
    DenseOperator() = default;
    DenseOperator(ComplexMatrix entries, bool hermitian);

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] const ComplexMatrix& entries() const { return entries_; }
    [[nodiscard]] bool hermitian() const { return hermitian_; }
    [[nodiscard]] double hermiticity_error() const;

private:
    ComplexMatrix entries_;
    bool hermitian_ = false;
};

/// Ascending eigenvalues, orthonormal eigenvectors with the first non-negligible
/// component made real and positive, and Gibbs weights at beta.
struct SpectralData {
    RealVector energies;
    ComplexMatrix vectors;
    RealVector gibbs_weights;
    double beta = 0.0;

    [[nodiscard]] double min_gap() const;
    [[nodiscard]] double max_residual(const DenseOperator& h) const;
};

[[nodiscard]] SpectralData spectral(const DenseOperator& h, double beta);

/// Quasi-free XY Hamiltonian on the 2^L mode Fock space. Orbital 2q holds
/// momentum k_q and orbital 2q+1 holds -k_q (k_q anti-periodic), with
/// Jordan-Wigner ordering along the orbital index:
///   H = sum_q eps_q (n_{k} + n_{-k}) + delta_q (-i c_k^+ c_{-k}^+ + i c_{-k} c_k).
/// Each pair contributes levels {eps - Lambda, eps, eps, eps + Lambda}; the empty
/// state has energy 0.
[[nodiscard]] DenseOperator build_quasifree(double h, double gamma, int length);

/// exp(-beta H) / Z. beta = 0 gives I / dim.
[[nodiscard]] DenseOperator gibbs(const DenseOperator& h, double beta);

/// Throws InvalidStateError unless rho is Hermitian with unit trace and no
/// eigenvalue below -1e-8.
void validate_density(const DenseOperator& rho);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 from the nuclear norm of
/// sqrt(rho) sqrt(sigma).
[[nodiscard]] double uhlmann(const DenseOperator& rho, const DenseOperator& sigma);
/// Tr[rho sigma].
[[nodiscard]] double hs_overlap(const DenseOperator& rho, const DenseOperator& sigma);
[[nodiscard]] double purity(const DenseOperator& rho);
/// (1/2) || rho - sigma ||_1.
[[nodiscard]] double trace_distance(const DenseOperator& rho, const DenseOperator& sigma);
/// U rho U^dagger with U = exp(-i t H).
[[nodiscard]] DenseOperator evolve(const DenseOperator& rho, const DenseOperator& h, double t);

enum class DegeneracyPolicy {
    /// Degenerate H1 is an error.
    Reject,
    /// Project onto each (numerically) degenerate eigenspace as a block.
    ProjectEigenspaces,
};

/// Infinite-time average of rho0 under H1: the part of rho0 block-diagonal in
/// the H1 eigenbasis.
[[nodiscard]] DenseOperator dephase(const DenseOperator& rho0, const DenseOperator& h1,
                                    DegeneracyPolicy policy = DegeneracyPolicy::Reject);

/// Echo of the Gibbs state of H0 under H1, with both spectra cached.
class EchoOracle {
public:
    EchoOracle(const DenseOperator& h0, const DenseOperator& h1, double beta);
    /// Quasi-free pre- and post-quench Hamiltonians from params (length <= 12).
    [[nodiscard]] static EchoOracle quasifree(const QuenchParams& params);

    [[nodiscard]] double loschmidt(double t) const;
    [[nodiscard]] double linearized(double t) const;
    [[nodiscard]] double purity() const;
    [[nodiscard]] double dephased_purity(DegeneracyPolicy policy = DegeneracyPolicy::ProjectEigenspaces) const;
    [[nodiscard]] DenseOperator rho0() const;
    [[nodiscard]] DenseOperator rho(double t) const;
    [[nodiscard]] const SpectralData& pre() const { return pre_; }
    [[nodiscard]] const SpectralData& post() const { return post_; }

private:
    [[nodiscard]] ComplexMatrix propagator_in_pre_basis(double t) const;

    DenseOperator h1_;
    SpectralData pre_;
    SpectralData post_;
    ComplexMatrix overlap_;  ///< pre eigenvectors^dagger * post eigenvectors
};

[[nodiscard]] double exact_le(const DenseOperator& h0, const DenseOperator& h1, double beta, double t);

struct PerturbationReport {
    RealVector e0;           ///< H0 levels
    RealVector e1;           ///< H0 + V levels
    RealVector p;            ///< Gibbs weights of H0
    Eigen::MatrixXd c;       ///< C_{n,m}, zero diagonal
    RealVector w_n0_zero;    ///< 2 |V_{n,0}|^2 / (E_n - E_0)^2, zero at n = 0
    RealVector w_n0;         ///< damping * w_n0_zero
    RealVector damping;      ///< temperature damping factors, zero at n = 0
    double chi_f = 0.0;      ///< sum_n w_n0_zero
    double ds2 = 0.0;
    double ds2_fr = 0.0;
    double nonclassical = 0.0;
    double lbar_perturbative = 1.0;
};

/// Second-order expansion of the echo of the Gibbs state of H0 under H0 + V.
/// Throws DegenerateSpectrumError when H0 has a gap below 1e-10.
[[nodiscard]] PerturbationReport perturbation_report(const DenseOperator& h0, const DenseOperator& v, double beta);
/// 1 - sum_{n != m} C_{n,m} [1 - cos((E1_m - E1_n) t)].
[[nodiscard]] double perturbative_le(const PerturbationReport& report, double t);
[[nodiscard]] double perturbative_le(const DenseOperator& h0, const DenseOperator& v, double beta, double t);

struct BuresDecomposition {
    double ds2 = 0.0;           ///< ds2_fr / 4 + nonclassical
    double ds2_fr = 0.0;        ///< sum_n dp_n^2 / p_n
    double nonclassical = 0.0;  ///< rotation of the eigenbasis
};
[[nodiscard]] BuresDecomposition bures_decomposition(const DenseOperator& h, const DenseOperator& dh, double beta);

/// F(rho0, rho1)^2 - (lbar - ds2_fr / 2) with rho1 the Gibbs state of H0 + V;
/// third order in V.
[[nodiscard]] double bures_relation_residual(const DenseOperator& h0, const DenseOperator& v, double beta);

/// p_0 (1 - e^{-beta Delta_n})^2 / (1 + e^{-beta Delta_n}) per level,
/// Delta_n = E_n - E_0. Entry 0 is zero. Throws on a degenerate ground state.
[[nodiscard]] RealVector damping_factors(std::span<const double> levels, double beta);

struct DampingReport {
    RealVector damping;
    RealVector w_zero;
    RealVector w_thermal;
    double chi_f = 0.0;
};
[[nodiscard]] DampingReport damping_generic(const DenseOperator& h0, const DenseOperator& v, double beta);

/// Largest trace distance between rho(t) and rho(0) over the given times.
[[nodiscard]] double max_trace_distance(const DenseOperator& h0, const DenseOperator& h1, double beta,
                                        std::span<const double> times);

/// Random Hermitian matrix (A + A^dagger) / 2 * scale with A standard complex
/// Gaussian, fixed by seed.
[[nodiscard]] DenseOperator random_hermitian(std::size_t dim, double scale, std::uint64_t seed);

struct QubitReport {
    std::size_t trials = 0;
    std::size_t violations = 0;     ///< F < Tr[U rho U^+ rho] / Tr[rho^2] - 1e-12
    double min_slack = 0.0;         ///< min of F - Tr[U rho U^+ rho] / Tr[rho^2]
    double max_closed_form_error = 0.0;
    double max_hubner_error = 0.0;  ///< |F dense - two-level closed form|
    [[nodiscard]] bool passed(double tol = 1e-12) const;
};

/// Random single-qubit states and unitaries: the purity-normalized overlap stays
/// below the fidelity, with slack Tr[rho^2] F - Tr[U rho U^+ rho] equal to
/// v^2 (1 - cos theta)(1 - v^2) / 4.
[[nodiscard]] QubitReport qubit_inequality_check(std::size_t n_trials, std::uint64_t seed);

/// ((cosh 2x + 1) / (2 (1 + cosh x)^2)) (sqrt(2 f) + 2)^2 - 2 f,
/// f = 2 cosh^2 x - sinh^2 x v.
[[nodiscard]] double q_function(double x, double v);

struct QScanReport {
    std::size_t points = 0;
    double minimum = 0.0;
    double argmin_x = 0.0;
    double argmin_v = 0.0;
    double max_abs_at_v0 = 0.0;
    /// Largest second difference in v above its rounding allowance (<= 0 means concave).
    double max_concavity_excess = 0.0;
    [[nodiscard]] bool passed(double tol = 1e-12) const;
};

/// Q on an nx-by-nv grid over x in [0, x_max], v in [0, 2]. Rounding in the
/// direct formula grows like e^{2x}, so x_max much beyond 3 is not useful.
[[nodiscard]] QScanReport q_function_scan(std::size_t nx, std::size_t nv, double x_max = 3.0);

}  // namespace lecho
