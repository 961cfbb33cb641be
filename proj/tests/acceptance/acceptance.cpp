// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lecho/averages.hpp"
#include "lecho/echo.hpp"
#include "lecho/oracle.hpp"
#include "lecho/special.hpp"
#include "lecho/stats.hpp"
#include "oracles.hpp"

using namespace lecho;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

QuenchParams make(int length, double h0, double h1, double g0, double g1, double beta) {
    QuenchParams p;
    p.length = length;
    p.h0 = h0;
    p.h1 = h1;
    p.gamma0 = g0;
    p.gamma1 = g1;
    p.beta = beta;
    return p;
}

QuenchParams fig1() { return make(80, 0.5, 0.5, 0.25, 0.1, 10.0); }

// Least squares y = A x through the origin; returns {A, R^2}.
std::pair<double, double> fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += x[i] * y[i], sxx += x[i] * x[i];
    const double a = sxy / sxx;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (y[i] - a * x[i]) * (y[i] - a * x[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    return {a, 1.0 - ss_res / ss_tot};
}

// Quadratic coefficient of 1 - L(t) fitted on t in (0, 0.01].
std::pair<double, double> short_time_fit(const ModeTable& t) {
    std::vector<double> x, y;
    for (int i = 1; i <= 100; ++i) {
        const double s = 1e-4 * i;
        x.push_back(s * s);
        y.push_back(one_minus_loschmidt(t, s));
    }
    return fit_through_origin(x, y);
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> time(0.0, 20.0);
    double worst_le = 0.0, worst_lef = 0.0, worst_d = 0.0, worst_p = 0.0;
    for (int length : {2, 4, 6, 8}) {
        for (int set = 0; set < 20; ++set) {
            const QuenchParams p = ref::random_params(rng, length);
            const ModeTable t(p);
            const auto o = EchoOracle::quasifree(p);
            for (int i = 0; i < 50; ++i) {
                const double x = time(rng);
                worst_le = std::max(worst_le, std::abs(loschmidt(t, x) - o.loschmidt(x)));
                worst_lef = std::max(worst_lef, std::abs(linearized(t, x) - o.linearized(x)));
            }
            const double d = effective_dimension(t).d_eff;
            worst_d = std::max(worst_d, std::abs(d - 1.0 / o.purity()) / d);
            worst_p = std::max(worst_p, std::abs(avg_linearized(t) - o.dephased_purity()));
        }
    }
    const double worst = std::max({worst_le, worst_lef, worst_d, worst_p});
    return {worst < 1e-9, fmt("max |dL|=%.2e |dLF|=%.2e rel|dd|=%.2e |dP|=%.2e", worst_le, worst_lef, worst_d, worst_p)};
}

Outcome bound_suite() {
    std::mt19937_64 rng(7002);
    std::uniform_int_distribution<int> half(1, 100);
    std::uniform_real_distribution<double> log_beta(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> time(0.0, 1000.0);
    double min_slack = INFINITY, worst_t0 = 0.0;
    for (int i = 0; i < 10000; ++i) {
        QuenchParams p = ref::random_params(rng, 2 * half(rng));
        p.beta = std::exp(log_beta(rng));
        p.zero_temperature = i % 10 == 0;
        const ModeTable t(p);
        const EchoPoint e = echo_point(t, time(rng));
        min_slack = std::min({min_slack, e.le - e.lower, e.upper - e.le});
        const auto b0 = bounds(t, 0.0);
        worst_t0 = std::max({worst_t0, std::abs(b0.lower - 1.0), std::abs(b0.upper - 1.0)});
    }
    return {min_slack >= -1e-12 && worst_t0 <= 1e-12, fmt("min slack=%.2e, t=0 deviation=%.2e", min_slack, worst_t0)};
}

Outcome figure_one() {
    const ModeTable t(fig1());
    const auto [a, r2] = short_time_fit(t);
    const double tau = default_tau(80);
    const auto s = sample_logle(t, tau, 100000, 20100917);
    double sum = 0.0, sum2 = 0.0;
    for (double z : s.z) {
        const double l = std::exp(z);
        sum += l;
        sum2 += l * l;
    }
    const double n = static_cast<double>(s.z.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1.0));
    const double analytic = avg_loschmidt(t);
    const double nse = std::abs(mean - analytic) / se;
    const double a_rel = std::abs(a / short_time_coefficient(t) - 1.0);
    return {r2 > 0.999 && nse < 3.0 && a > 0.0 && a_rel < 1e-3,
            fmt("A=%.6g (closed form off by %.1e) R^2=%.8f, MC mean=%.6f analytic=%.6f (%.2f SE)", a, a_rel, r2, mean,
                analytic, nse)};
}

Outcome extensivity() {
    QuenchParams p = make(100, 0.3, 0.6, 1.0, 0.8, 2.0);
    const double a100 = short_time_fit(ModeTable(p)).first;
    p.length = 200;
    const double a200 = short_time_fit(ModeTable(p)).first;
    const double ratio = a200 / a100;
    return {std::abs(ratio - 2.0) <= 0.2, fmt("A(200)/A(100)=%.5f", ratio)};
}

// Distance between the two most prominent histogram peaks.
double peak_separation(const Classification& c) {
    if (c.peaks.size() < 2) return NAN;
    return std::abs(c.peaks[0].location - c.peaks[1].location);
}

Outcome figure_three() {
    const auto run = [](double temperature) {
        const ModeTable t(make(50, 0.99, 1.01, 1.0, 1.0, 1.0 / temperature));
        return classify(weights(t), sample_logle(t, default_tau(50), 100000, 20100917));
    };
    const Classification cold = run(0.02);
    const Classification hot = run(0.18);
    const double predicted = 2.0 * std::abs(cold.a1 - cold.a2);
    const double measured = peak_separation(cold);
    const double rel = std::abs(measured - predicted) / predicted;
    const bool ok = cold.label == DistributionLabel::DoublePeaked && hot.label == DistributionLabel::Gaussian &&
                    rel <= 0.15;
    return {ok, fmt("T=0.02 %s, T=0.18 %s, separation %.4g vs %.4g (%.1f%%)", std::string(to_string(cold.label)).c_str(),
                    std::string(to_string(hot.label)).c_str(), measured, predicted, 100.0 * rel)};
}

Outcome figure_four() {
    const auto run = [](int length) {
        const ModeTable t(make(length, 0.2, 0.2, 0.01, -0.01, 40.0));
        return classify(weights(t), sample_logle(t, default_tau(length), 100000, 20100917));
    };
    const Classification c78 = run(78);
    const Classification c70 = run(70);
    const double spread = std::abs(c78.a1 - c78.a2) / c78.a1;
    const bool ok = c78.label == DistributionLabel::MergedSinglePeak && spread <= 0.05 &&
                    c70.label == DistributionLabel::DoublePeaked;
    return {ok, fmt("L=78 %s (|a1-a2|/a1=%.3f), L=70 %s", std::string(to_string(c78.label)).c_str(), spread,
                    std::string(to_string(c70.label)).c_str())};
}

Outcome characteristic_function() {
    QuenchParams p = make(2000, 0.5, 0.53, 1.0, 1.0, 1.0);
    p.zero_temperature = true;
    const ModeTable t(p);
    double max_dtheta = 0.0;
    for (const auto& m : t) max_dtheta = std::max(max_dtheta, std::abs(m.dtheta));
    const auto w = weights(t);
    const auto s = sample_logle(t, default_tau(2000), 100000, 20100917);
    std::vector<double> lam;
    for (int i = 0; i <= 500; ++i) lam.push_back(0.1 * i);
    const auto model = char_fn(w, lam);
    const auto emp = empirical_char_fn(s.z, s.z_mean, lam);
    double sup = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) sup = std::max(sup, std::abs(emp[i] - model[i]));
    const double tail = model.back();
    const double var = sample_moments(s.z).variance;
    const double rel = std::abs(w.kappa2() - var) / var;
    return {max_dtheta < 0.05 && sup < 0.05 && rel <= 0.05,
            fmt("max dtheta=%.4f, sup|dphi|=%.2e (phi(50)=%.3f), kappa2=%.4g vs %.4g (%.2f%%)", max_dtheta, sup, tail,
                w.kappa2(), var, 100.0 * rel)};
}

Outcome appendix() {
    const QScanReport q = q_function_scan(1000, 1000);
    const QubitReport r = qubit_inequality_check(100000, 7003);
    const bool ok = q.points == 1000000 && q.minimum >= -1e-12 && q.max_abs_at_v0 <= 1e-11 && r.violations == 0 &&
                    r.max_closed_form_error <= 1e-12;
    return {ok, fmt("Q min=%.2e |Q(x,0)|<=%.2e, qubit violations=%zu closed-form error=%.2e", q.minimum,
                    q.max_abs_at_v0, r.violations, r.max_closed_form_error)};
}

Outcome perturbation() {
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.5 * i);
    double worst_ratio = 0.0, worst_bures = 0.0, dmin = INFINITY, dmax = -INFINITY, cold = 0.0;
    for (std::uint64_t k = 0; k < 3; ++k) {
        const DenseOperator h0 = random_hermitian(8, 1.0, 101 + 2 * k);
        const DenseOperator v0 = random_hermitian(8, 1.0, 102 + 2 * k);
        double prev = 0.0, scale = 1e-2;
        for (int h = 0; h <= 3; ++h, scale *= 0.5) {
            const DenseOperator v(scale * v0.entries(), true);
            const auto rep = perturbation_report(h0, v, 1.0);
            const EchoOracle o(h0, DenseOperator(h0.entries() + v.entries(), true), 1.0);
            double err = 0.0;
            for (double x : times) err = std::max(err, std::abs(o.loschmidt(x) - perturbative_le(rep, x)));
            if (h > 0) worst_ratio = std::max(worst_ratio, std::abs(prev / err - 8.0) / 8.0);
            prev = err;
        }
        const DenseOperator vb(1e-3 * v0.entries(), true);
        worst_bures = std::max(worst_bures, std::abs(bures_relation_residual(h0, vb, 1.0)));
        for (double beta : {0.01, 0.3, 1.0, 5.0, 50.0}) {
            const RealVector d = damping_generic(h0, v0, beta).damping.tail(7);
            dmin = std::min(dmin, d.minCoeff());
            dmax = std::max(dmax, d.maxCoeff());
        }
        const RealVector d = damping_generic(h0, v0, 1e4).damping.tail(7);
        cold = std::max(cold, (d.array() - 1.0).abs().maxCoeff());
    }
    const bool ok = worst_ratio <= 0.3 && worst_bures < 1e-8 && dmin >= 0.0 && dmax <= 1.0 && cold < 1e-6;
    return {ok, fmt("max |ratio-8|/8=%.3f, Bures residual=%.2e, damping in [%.3g, %.3g], cold deviation=%.1e",
                    worst_ratio, worst_bures, dmin, dmax, cold)};
}

Outcome variance_series() {
    const ModeTable t(fig1());
    const double analytic = variance_le(t);
    const auto s = sample_logle(t, default_tau(80), 100000, 20100917);
    std::vector<double> l(s.z.size());
    std::transform(s.z.begin(), s.z.end(), l.begin(), [](double z) { return std::exp(z); });
    const double empirical = sample_moments(l).variance;
    const double rel_mc = std::abs(analytic - empirical) / analytic;

    QuenchParams sq = make(40, 0.5, 0.5, 0.8, 0.802, 2.0);
    const ModeTable ts(sq);
    double max_dtheta = 0.0;
    for (const auto& m : ts) max_dtheta = std::max(max_dtheta, std::abs(m.dtheta));
    const double rel_sq = std::abs(smallquench_variance(ts) / variance_le(ts) - 1.0);

    bool monotone = true;
    double prev = INFINITY;
    QuenchParams p = fig1();
    for (int i = 0; i < 10; ++i) {
        p.beta = 10.0 * std::pow(0.6, i);
        const double v = variance_le(ModeTable(p));
        monotone = monotone && v <= prev * (1.0 + 1e-12);
        prev = v;
    }
    return {rel_mc <= 0.05 && max_dtheta < 0.01 && rel_sq <= 0.01 && monotone,
            fmt("var %.5g vs MC %.5g (%.2f%%), small quench (dtheta<=%.4f) %.3f%%, monotone=%d", analytic, empirical,
                100.0 * rel_mc, max_dtheta, 100.0 * rel_sq, monotone ? 1 : 0)};
}

Outcome special_functions() {
    double e_err = 0.0, j_err = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double m = 0.995 * i / 200.0;
        e_err = std::max(e_err, std::abs(elliptic_e(m) - ref::quad_elliptic_e(m)));
    }
    for (int i = 0; i <= 500; ++i) {
        const double x = 0.1 * i;
        j_err = std::max(j_err, std::abs(bessel_j0(x) - ref::quad_j0(x)));
    }
    const bool exact = elliptic_e(0.0) == std::numbers::pi / 2 && bessel_j0(0.0) == 1.0;
    return {exact && e_err <= 1e-12 && j_err <= 1e-10,
            fmt("E(0), J0(0) exact=%d, E err=%.2e, J0 err=%.2e", exact ? 1 : 0, e_err, j_err)};
}

Outcome bell_widths() {
    double worst = 0.0;
    std::string d;
    for (double h0 : {0.9, 0.95, 0.99}) {
        const double r = ising_inflection_width(h0) / (1.0 - h0);
        worst = std::max(worst, std::abs(r - 1.8) / 1.8);
        d += fmt("h0=%.2f:%.3f ", h0, r);
    }
    for (double g0 : {0.1, 0.05, 0.01}) {
        const double r = aniso_inflection_width(g0) / g0;
        worst = std::max(worst, std::abs(r - 1.8) / 1.8);
        d += fmt("g0=%.2f:%.3f ", g0, r);
    }
    return {worst <= 0.1, d + fmt("(max deviation %.1f%%)", 100.0 * worst)};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_s;  // 0 for none
    };
    const std::vector<Criterion> criteria{
        {"oracle equivalence", oracle_equivalence, 120.0},
        {"bound suite", bound_suite, 0.0},
        {"time series reproduction", figure_one, 60.0},
        {"short-time extensivity", extensivity, 0.0},
        {"near-critical temperature crossover", figure_three, 120.0},
        {"merged versus split peaks", figure_four, 0.0},
        {"characteristic function", characteristic_function, 0.0},
        {"qubit inequality and Q function", appendix, 0.0},
        {"perturbation theory", perturbation, 0.0},
        {"variance series", variance_series, 0.0},
        {"special functions", special_functions, 0.0},
        {"bell-curve widths", bell_widths, 0.0},
    };
    // Optional arguments pick criteria by number; default is all of them.
    std::vector<bool> selected(criteria.size(), argc <= 1);
    for (int a = 1; a < argc; ++a) {
        const long n = std::strtol(argv[a], nullptr, 10);
        if (n >= 1 && n <= static_cast<long>(criteria.size())) selected[static_cast<std::size_t>(n - 1)] = true;
    }
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected[i]) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].budget_s > 0.0 && secs > criteria[i].budget_s) {
            o.passed = false;
            o.detail += fmt(" [over %.0f s budget]", criteria[i].budget_s);
        }
        failures += o.passed ? 0 : 1;
        std::printf("%s %2zu %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
