#include "lecho/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <string>

#include "lecho/error.hpp"

#include <lapacke.h>

namespace lecho {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_square(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("operator must be square");
    if (m.rows() == 0) throw ValidationError("operator must be non-empty");
}

void require_same_dim(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim() != b.dim()) throw ValidationError("operator dimensions differ");
}

void require_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and non-negative");
}

// Consecutive runs of levels closer than tol.
std::vector<std::size_t> cluster_starts(const RealVector& e, double tol) {
    std::vector<std::size_t> starts{0};
    for (Eigen::Index i = 1; i < e.size(); ++i)
        if (e[i] - e[i - 1] >= tol) starts.push_back(static_cast<std::size_t>(i));
    starts.push_back(static_cast<std::size_t>(e.size()));
    return starts;
}

// Keeps only blocks of m that lie within one cluster.
ComplexMatrix block_diagonal_part(const ComplexMatrix& m, const std::vector<std::size_t>& starts) {
    ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
    for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        const auto b = static_cast<Eigen::Index>(starts[c]);
        const auto n = static_cast<Eigen::Index>(starts[c + 1] - starts[c]);
        out.block(b, b, n, n) = m.block(b, b, n, n);
    }
    return out;
}

// Singular values from LAPACK zgesdd. Eigen 3.4.0's BDCSVD returns wrong
// values for some of the matrices met here; JacobiSVD is exact but too slow.
double nuclear_norm(const ComplexMatrix& a) {
    ComplexMatrix work = a;
    const auto m = static_cast<lapack_int>(work.rows());
    const auto n = static_cast<lapack_int>(work.cols());
    RealVector s(std::min(m, n));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n,
                                           reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
                                           nullptr, 1, nullptr, 1);
    if (info != 0) throw NonConvergenceError("zgesdd failed with info " + std::to_string(info));
    return s.sum();
}

// sqrt of a density operator after validation; small eigenvalues at the
// rounding floor are set to zero.
ComplexMatrix density_sqrt(const DenseOperator& rho) {
    validate_density(rho);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.entries());
    RealVector lam = es.eigenvalues();
    const double floor = static_cast<double>(rho.dim()) * kEps * std::max(lam.maxCoeff(), 0.0);
    for (auto& x : lam) x = x < floor ? 0.0 : std::sqrt(x);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix from_spectrum(const ComplexMatrix& vectors, const RealVector& diag) {
    return vectors * diag.cast<cplx>().asDiagonal() * vectors.adjoint();
}

RealVector boltzmann(const RealVector& e, double beta) {
    RealVector p(e.size());
    const double e0 = e.minCoeff();
    for (Eigen::Index i = 0; i < e.size(); ++i) p[i] = std::exp(-beta * (e[i] - e0));
    return p / p.sum();
}

// C_{n,m} table and Gibbs-weight derivatives shared by the perturbative routines.
struct SecondOrder {
    SpectralData s0;
    ComplexMatrix vm;
    Eigen::MatrixXd c;
    double ds2_fr = 0.0;
};

SecondOrder second_order(const DenseOperator& h0, const DenseOperator& v, double beta) {
    require_same_dim(h0, v);
    if (!v.hermitian()) throw ValidationError("perturbation must be Hermitian");
    SecondOrder r;
    r.s0 = spectral(h0, beta);
    if (r.s0.min_gap() < kDegeneracyTolerance)
        throw DegenerateSpectrumError("H0 has a level spacing below " + std::to_string(kDegeneracyTolerance));
    const auto& e = r.s0.energies;
    const auto& p = r.s0.gibbs_weights;
    r.vm = r.s0.vectors.adjoint() * v.entries() * r.s0.vectors;
    const Eigen::Index d = e.size();
    r.c = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) {
            if (n == m) continue;
            const double ps = p[m] + p[n];
            if (!(ps > 0.0)) continue;
            const double dp = p[m] - p[n];
            const double de = e[m] - e[n];
            r.c(n, m) = dp * dp / ps * std::norm(r.vm(m, n)) / (de * de);
        }
    double mean = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) mean += p[n] * r.vm(n, n).real();
    for (Eigen::Index n = 0; n < d; ++n) {
        if (!(p[n] > 0.0)) continue;
        const double dp = -beta * p[n] * (r.vm(n, n).real() - mean);
        r.ds2_fr += dp * dp / p[n];
    }
    return r;
}

}  // namespace

DenseOperator::DenseOperator(ComplexMatrix entries, bool hermitian) : entries_(std::move(entries)), hermitian_(hermitian) {
    require_square(entries_);
    if (hermitian_ && hermiticity_error() >= 1e-12 * std::max(1.0, max_abs(entries_)))
        throw ValidationError("operator flagged Hermitian is not");
}

double DenseOperator::hermiticity_error() const { return max_abs(entries_ - entries_.adjoint()); }

double SpectralData::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < energies.size(); ++i) g = std::min(g, energies[i] - energies[i - 1]);
    return g;
}

double SpectralData::max_residual(const DenseOperator& h) const {
    const ComplexMatrix r = h.entries() * vectors - vectors * energies.cast<cplx>().asDiagonal();
    return r.colwise().norm().maxCoeff();
}

SpectralData spectral(const DenseOperator& h, double beta) {
    if (!h.hermitian()) throw ValidationError("spectral decomposition needs a Hermitian operator");
    require_beta(beta);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.entries());
    if (es.info() != Eigen::Success) throw NonConvergenceError("eigendecomposition failed");
    SpectralData s;
    s.energies = es.eigenvalues();
    s.vectors = es.eigenvectors();
    for (Eigen::Index j = 0; j < s.vectors.cols(); ++j) {
        auto col = s.vectors.col(j);
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            const double a = std::abs(col[i]);
            if (a > 1e-12) {
                col *= std::conj(col[i]) / a;
                break;
            }
        }
    }
    s.beta = beta;
    s.gibbs_weights = boltzmann(s.energies, beta);
    return s;
}

DenseOperator build_quasifree(double h, double gamma, int length) {
    if (length > kMaxOracleLength)
        throw ValidationError("dense oracle supports length <= " + std::to_string(kMaxOracleLength));
    const std::vector<double> ks = momenta(length);
    const std::size_t dim = std::size_t{1} << length;
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

    // Returns false when the operator annihilates the state.
    auto create = [](std::size_t& s, int j, double& sign) {
        const std::size_t bit = std::size_t{1} << j;
        if (s & bit) return false;
        if (std::popcount(s & (bit - 1)) % 2) sign = -sign;
        s |= bit;
        return true;
    };
    auto annihilate = [](std::size_t& s, int j, double& sign) {
        const std::size_t bit = std::size_t{1} << j;
        if (!(s & bit)) return false;
        if (std::popcount(s & (bit - 1)) % 2) sign = -sign;
        s &= ~bit;
        return true;
    };

    const cplx i_unit(0.0, 1.0);
    for (std::size_t q = 0; q < ks.size(); ++q) {
        const ModeQuantities mq = dispersion(h, gamma, ks[q]);
        const int kp = static_cast<int>(2 * q);
        const int km = kp + 1;
        for (std::size_t s = 0; s < dim; ++s) {
            const auto col = static_cast<Eigen::Index>(s);
            const int occ = static_cast<int>((s >> kp) & 1U) + static_cast<int>((s >> km) & 1U);
            m(col, col) += mq.eps * occ;

            std::size_t t = s;
            double sign = 1.0;
            if (create(t, km, sign) && create(t, kp, sign))
                m(static_cast<Eigen::Index>(t), col) += -i_unit * mq.delta * sign;

            t = s;
            sign = 1.0;
            if (annihilate(t, kp, sign) && annihilate(t, km, sign))
                m(static_cast<Eigen::Index>(t), col) += i_unit * mq.delta * sign;
        }
    }
    return DenseOperator(std::move(m), true);
}

DenseOperator gibbs(const DenseOperator& h, double beta) {
    const SpectralData s = spectral(h, beta);
    ComplexMatrix rho = from_spectrum(s.vectors, s.gibbs_weights);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DenseOperator(std::move(rho), true);
}

void validate_density(const DenseOperator& rho) {
    if (!rho.hermitian()) throw InvalidStateError("density operator must be Hermitian");
    const double tr = rho.entries().trace().real();
    if (std::abs(tr - 1.0) > 1e-10) throw InvalidStateError("density operator trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.entries(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) throw InvalidStateError("density operator has a negative eigenvalue");
}

double uhlmann(const DenseOperator& rho, const DenseOperator& sigma) {
    require_same_dim(rho, sigma);
    const double f = nuclear_norm(density_sqrt(rho) * density_sqrt(sigma));
    return f * f;
}

double hs_overlap(const DenseOperator& rho, const DenseOperator& sigma) {
    require_same_dim(rho, sigma);
    return rho.entries().cwiseProduct(sigma.entries().transpose()).sum().real();
}

double purity(const DenseOperator& rho) { return rho.entries().cwiseAbs2().sum(); }

double trace_distance(const DenseOperator& rho, const DenseOperator& sigma) {
    require_same_dim(rho, sigma);
    const ComplexMatrix d = rho.entries() - sigma.entries();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DenseOperator evolve(const DenseOperator& rho, const DenseOperator& h, double t) {
    require_same_dim(rho, h);
    const SpectralData s = spectral(h, 0.0);
    const Eigen::VectorXcd phase = (-cplx(0.0, 1.0) * t * s.energies.cast<cplx>()).array().exp().matrix();
    const ComplexMatrix u = s.vectors * phase.asDiagonal() * s.vectors.adjoint();
    ComplexMatrix out = u * rho.entries() * u.adjoint();
    if (rho.hermitian()) out = 0.5 * (out + out.adjoint()).eval();
    return DenseOperator(std::move(out), rho.hermitian());
}

DenseOperator dephase(const DenseOperator& rho0, const DenseOperator& h1, DegeneracyPolicy policy) {
    require_same_dim(rho0, h1);
    const SpectralData s = spectral(h1, 0.0);
    if (policy == DegeneracyPolicy::Reject && s.min_gap() < kDegeneracyTolerance)
        throw DegenerateSpectrumError("post-quench spectrum is degenerate; dephasing is not unique");
    const ComplexMatrix in_basis = s.vectors.adjoint() * rho0.entries() * s.vectors;
    const ComplexMatrix kept = block_diagonal_part(in_basis, cluster_starts(s.energies, kDegeneracyTolerance));
    ComplexMatrix out = s.vectors * kept * s.vectors.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return DenseOperator(std::move(out), true);
}

EchoOracle::EchoOracle(const DenseOperator& h0, const DenseOperator& h1, double beta)
    : h1_(h1), pre_(spectral(h0, beta)), post_(spectral(h1, beta)) {
    require_same_dim(h0, h1);
    overlap_ = pre_.vectors.adjoint() * post_.vectors;
}

EchoOracle EchoOracle::quasifree(const QuenchParams& params) {
    params.validate();
    if (params.zero_temperature) throw ValidationError("dense oracle needs a finite beta");
    return EchoOracle(build_quasifree(params.h0, params.gamma0, params.length),
                      build_quasifree(params.h1, params.gamma1, params.length), params.beta);
}

ComplexMatrix EchoOracle::propagator_in_pre_basis(double t) const {
    const Eigen::VectorXcd phase = (-cplx(0.0, 1.0) * t * post_.energies.cast<cplx>()).array().exp().matrix();
    return overlap_ * phase.asDiagonal() * overlap_.adjoint();
}

double EchoOracle::loschmidt(double t) const {
    // sqrt(rho) U sqrt(rho) in the pre-quench eigenbasis; its singular values are
    // those of sqrt(rho) sqrt(rho(t)).
    const RealVector d = pre_.gibbs_weights.cwiseSqrt();
    const ComplexMatrix a = d.asDiagonal() * propagator_in_pre_basis(t) * d.asDiagonal();
    const double f = nuclear_norm(a);
    return f * f;
}

double EchoOracle::linearized(double t) const {
    const ComplexMatrix w = propagator_in_pre_basis(t);
    const auto& p = pre_.gibbs_weights;
    return (p * p.transpose()).cwiseProduct(w.cwiseAbs2()).sum();
}

double EchoOracle::purity() const { return pre_.gibbs_weights.squaredNorm(); }

double EchoOracle::dephased_purity(DegeneracyPolicy policy) const {
    if (policy == DegeneracyPolicy::Reject && post_.min_gap() < kDegeneracyTolerance)
        throw DegenerateSpectrumError("post-quench spectrum is degenerate; dephasing is not unique");
    const ComplexMatrix in_post = overlap_.adjoint() * pre_.gibbs_weights.cast<cplx>().asDiagonal() * overlap_;
    return block_diagonal_part(in_post, cluster_starts(post_.energies, kDegeneracyTolerance)).cwiseAbs2().sum();
}

DenseOperator EchoOracle::rho0() const {
    ComplexMatrix r = from_spectrum(pre_.vectors, pre_.gibbs_weights);
    r = 0.5 * (r + r.adjoint()).eval();
    return DenseOperator(std::move(r), true);
}

DenseOperator EchoOracle::rho(double t) const { return evolve(rho0(), h1_, t); }

double exact_le(const DenseOperator& h0, const DenseOperator& h1, double beta, double t) {
    return EchoOracle(h0, h1, beta).loschmidt(t);
}

PerturbationReport perturbation_report(const DenseOperator& h0, const DenseOperator& v, double beta) {
    const SecondOrder so = second_order(h0, v, beta);
    PerturbationReport r;
    r.e0 = so.s0.energies;
    r.p = so.s0.gibbs_weights;
    r.c = so.c;
    const DenseOperator h1(h0.entries() + v.entries(), true);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h1.entries(), Eigen::EigenvaluesOnly);
    r.e1 = es.eigenvalues();

    const Eigen::Index d = r.e0.size();
    r.damping = damping_factors(std::span<const double>(r.e0.data(), static_cast<std::size_t>(d)), beta);
    r.w_n0_zero = RealVector::Zero(d);
    for (Eigen::Index n = 1; n < d; ++n) {
        const double gap = r.e0[n] - r.e0[0];
        r.w_n0_zero[n] = 2.0 * std::norm(so.vm(n, 0)) / (gap * gap);
    }
    r.w_n0 = r.damping.cwiseProduct(r.w_n0_zero);
    r.chi_f = r.w_n0_zero.sum();
    r.ds2_fr = so.ds2_fr;
    r.nonclassical = 0.5 * r.c.sum();
    r.ds2 = 0.25 * r.ds2_fr + r.nonclassical;
    r.lbar_perturbative = 1.0 - r.c.sum();
    return r;
}

double perturbative_le(const PerturbationReport& report, double t) {
    const Eigen::Index d = report.e1.size();
    double s = 0.0;
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) {
            if (n == m) continue;
            const double x = 0.5 * (report.e1[m] - report.e1[n]) * t;
            const double sx = std::sin(x);
            s += report.c(n, m) * 2.0 * sx * sx;
        }
    return 1.0 - s;
}

double perturbative_le(const DenseOperator& h0, const DenseOperator& v, double beta, double t) {
    return perturbative_le(perturbation_report(h0, v, beta), t);
}

BuresDecomposition bures_decomposition(const DenseOperator& h, const DenseOperator& dh, double beta) {
    const SecondOrder so = second_order(h, dh, beta);
    BuresDecomposition b;
    b.ds2_fr = so.ds2_fr;
    b.nonclassical = 0.5 * so.c.sum();
    b.ds2 = 0.25 * b.ds2_fr + b.nonclassical;
    return b;
}

double bures_relation_residual(const DenseOperator& h0, const DenseOperator& v, double beta) {
    const SecondOrder so = second_order(h0, v, beta);
    const SpectralData s1 = spectral(DenseOperator(h0.entries() + v.entries(), true), beta);
    const ComplexMatrix r0 = from_spectrum(so.s0.vectors, so.s0.gibbs_weights.cwiseSqrt());
    const ComplexMatrix r1 = from_spectrum(s1.vectors, s1.gibbs_weights.cwiseSqrt());
    const double root = nuclear_norm(r0 * r1);
    const double f = root * root;
    const double lbar = 1.0 - so.c.sum();
    return f * f - (lbar - 0.5 * so.ds2_fr);
}

RealVector damping_factors(std::span<const double> levels, double beta) {
    require_beta(beta);
    const auto d = static_cast<Eigen::Index>(levels.size());
    if (d < 2) throw ValidationError("damping factors need at least two levels");
    if (!std::is_sorted(levels.begin(), levels.end())) throw ValidationError("levels must be ascending");
    if (levels[1] - levels[0] < kDegeneracyTolerance) throw DegenerateSpectrumError("degenerate ground state");
    double z = 0.0;
    for (double e : levels) z += std::exp(-beta * (e - levels[0]));
    const double p0 = 1.0 / z;
    RealVector out = RealVector::Zero(d);
    for (Eigen::Index n = 1; n < d; ++n) {
        const double x = beta * (levels[static_cast<std::size_t>(n)] - levels[0]);
        const double one_minus = -std::expm1(-x);
        out[n] = p0 * one_minus * one_minus / (1.0 + std::exp(-x));
    }
    return out;
}

DampingReport damping_generic(const DenseOperator& h0, const DenseOperator& v, double beta) {
    require_same_dim(h0, v);
    const SpectralData s = spectral(h0, beta);
    const Eigen::Index d = s.energies.size();
    DampingReport r;
    r.damping = damping_factors(std::span<const double>(s.energies.data(), static_cast<std::size_t>(d)), beta);
    const Eigen::VectorXcd v0 = s.vectors.adjoint() * (v.entries() * s.vectors.col(0));
    r.w_zero = RealVector::Zero(d);
    for (Eigen::Index n = 1; n < d; ++n) {
        const double gap = s.energies[n] - s.energies[0];
        r.w_zero[n] = 2.0 * std::norm(v0[n]) / (gap * gap);
    }
    r.w_thermal = r.damping.cwiseProduct(r.w_zero);
    r.chi_f = r.w_zero.sum();
    return r;
}

double max_trace_distance(const DenseOperator& h0, const DenseOperator& h1, double beta,
                          std::span<const double> times) {
    const EchoOracle o(h0, h1, beta);
    const DenseOperator r0 = o.rho0();
    double best = 0.0;
    for (double t : times) best = std::max(best, trace_distance(o.rho(t), r0));
    return best;
}

DenseOperator random_hermitian(std::size_t dim, double scale, std::uint64_t seed) {
    if (dim == 0) throw ValidationError("dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = cplx(re, im);
        }
    ComplexMatrix h = 0.5 * scale * (a + a.adjoint());
    return DenseOperator(std::move(h), true);
}

bool QubitReport::passed(double tol) const {
    return violations == 0 && max_closed_form_error <= tol && max_hubner_error <= tol;
}

QubitReport qubit_inequality_check(std::size_t n_trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix sy{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
    const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);

    QubitReport rep;
    rep.trials = n_trials;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        Eigen::Vector3d n(normal(rng), normal(rng), normal(rng));
        n.normalize();
        const double v = unit(rng);
        ComplexMatrix g(2, 2);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) {
                const double re = normal(rng);
                const double im = normal(rng);
                g(i, j) = cplx(re, im);
            }
        const ComplexMatrix u = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ();

        const ComplexMatrix rho_m = 0.5 * (id + v * (n.x() * sx + n.y() * sy + n.z() * sz));
        const DenseOperator rho(rho_m, true);
        ComplexMatrix sig_m = u * rho_m * u.adjoint();
        sig_m = 0.5 * (sig_m + sig_m.adjoint()).eval();
        const DenseOperator sigma(sig_m, true);

        const double f = uhlmann(rho, sigma);
        const double overlap = hs_overlap(sigma, rho);
        const double pur = purity(rho);
        const double slack = f - overlap / pur;
        rep.min_slack = std::min(rep.min_slack, slack);
        if (slack < -1e-12) ++rep.violations;

        // Bloch direction of sigma.
        const Eigen::Vector3d m((sig_m * sx).trace().real(), (sig_m * sy).trace().real(),
                                (sig_m * sz).trace().real());
        const double cos_theta = v > 0.0 ? n.dot(m) / v : 1.0;
        const double closed = v * v * (1.0 - cos_theta) * (1.0 - v * v) / 4.0;
        rep.max_closed_form_error = std::max(rep.max_closed_form_error, std::abs(pur * f - overlap - closed));

        const double det_r = rho_m.determinant().real();
        const double det_s = sig_m.determinant().real();
        const double hubner = overlap + 2.0 * std::sqrt(std::max(det_r * det_s, 0.0));
        rep.max_hubner_error = std::max(rep.max_hubner_error, std::abs(f - hubner));
    }
    if (n_trials == 0) rep.min_slack = 0.0;
    return rep;
}

double q_function(double x, double v) {
    const double c = std::cosh(x);
    const double s = std::sinh(x);
    const double f = 2.0 * c * c - s * s * v;
    const double root = std::sqrt(2.0 * f) + 2.0;
    return (std::cosh(2.0 * x) + 1.0) / (2.0 * (1.0 + c) * (1.0 + c)) * root * root - 2.0 * f;
}

bool QScanReport::passed(double tol) const {
    return minimum >= -tol && max_abs_at_v0 <= 1e-11 && max_concavity_excess <= 0.0;
}

QScanReport q_function_scan(std::size_t nx, std::size_t nv, double x_max) {
    if (nx < 2 || nv < 3) throw ValidationError("Q scan needs nx >= 2 and nv >= 3");
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw ValidationError("x_max must be positive");
    QScanReport rep;
    rep.minimum = std::numeric_limits<double>::infinity();
    rep.max_concavity_excess = -std::numeric_limits<double>::infinity();
    const double hv = 2.0 / static_cast<double>(nv - 1);
    std::vector<double> row(nv);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = x_max * static_cast<double>(i) / static_cast<double>(nx - 1);
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = j + 1 == nv ? 2.0 : hv * static_cast<double>(j);
            row[j] = q_function(x, v);
            if (row[j] < rep.minimum) {
                rep.minimum = row[j];
                rep.argmin_x = x;
                rep.argmin_v = v;
            }
        }
        rep.max_abs_at_v0 = std::max(rep.max_abs_at_v0, std::abs(row[0]));
        // Terms of size ~4 f cancel in Q; allow their rounding in the second difference.
        const double c = std::cosh(x);
        const double allowance = 64.0 * kEps * 8.0 * c * c;
        for (std::size_t j = 1; j + 1 < nv; ++j) {
            const double d2 = row[j + 1] - 2.0 * row[j] + row[j - 1];
            rep.max_concavity_excess = std::max(rep.max_concavity_excess, d2 - allowance);
        }
        rep.points += nv;
    }
    return rep;
}

}  // namespace lecho
