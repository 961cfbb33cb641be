#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "commands.hpp"
#include "io.hpp"
#include "lecho/averages.hpp"
#include "lecho/echo.hpp"
#include "lecho/oracle.hpp"

namespace lecho::cli {

namespace {

QuenchParams random_params(std::mt19937_64& rng, int length) {
    std::uniform_real_distribution<double> field(-1.5, 1.5);
    std::uniform_real_distribution<double> beta(0.1, 5.0);
    QuenchParams p;
    p.length = length;
    p.h0 = field(rng);
    p.h1 = field(rng);
    p.gamma0 = field(rng);
    p.gamma1 = field(rng);
    p.beta = beta(rng);
    return p;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

SuiteResult verify_oracle_equivalence(const VerifyOptions& o) {
    SuiteResult r{"oracle_equivalence", false, "max |product formula - dense|", 0.0, 1e-9, {}};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> time(0.0, 20.0);
    const int sets = o.quick ? 3 : 20;
    const int n_times = o.quick ? 5 : 50;
    double w_le = 0.0, w_lef = 0.0, w_deff = 0.0, w_bar = 0.0;
    for (int length : {2, 4, 6, 8}) {
        for (int s = 0; s < sets; ++s) {
            const QuenchParams p = random_params(rng, length);
            const ModeTable table(p);
            const EchoOracle oracle = EchoOracle::quasifree(p);
            for (int i = 0; i < n_times; ++i) {
                const double t = time(rng);
                double le = loschmidt(table, t);
                if (o.inject_fault) le *= 1.0 + 1e-6;
                w_le = std::max(w_le, std::abs(le - oracle.loschmidt(t)));
                w_lef = std::max(w_lef, std::abs(linearized(table, t) - oracle.linearized(t)));
            }
            w_deff = std::max(w_deff, rel_err(effective_dimension(table).d_eff, 1.0 / oracle.purity()));
            w_bar = std::max(w_bar, std::abs(avg_linearized(table) - oracle.dephased_purity()));
        }
    }
    r.worst = std::max({w_le, w_lef, w_deff, w_bar});
    r.passed = r.worst < r.threshold;
    r.detail = {{"le", w_le}, {"lef", w_lef}, {"d_eff_relative", w_deff}, {"dephased_purity", w_bar},
                {"parameter_sets_per_length", sets}, {"times_per_set", n_times}};
    return r;
}

SuiteResult verify_bounds(const VerifyOptions& o) {
    SuiteResult r{"bounds", false, "min slack of d_eff L_F <= L <= L_F + 1 - 1/d_eff", 0.0, -1e-12, {}};
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_int_distribution<int> half(1, 100);
    std::uniform_real_distribution<double> field(-1.5, 1.5);
    std::uniform_real_distribution<double> log_beta(std::log(0.05), std::log(50.0));
    std::uniform_real_distribution<double> time(0.0, 100.0);
    const int n = o.quick ? 1000 : 10000;
    double worst = std::numeric_limits<double>::infinity();
    double t0 = 0.0;
    for (int i = 0; i < n; ++i) {
        QuenchParams p;
        p.length = 2 * half(rng);
        p.h0 = field(rng);
        p.h1 = field(rng);
        p.gamma0 = field(rng);
        p.gamma1 = field(rng);
        p.beta = std::exp(log_beta(rng));
        p.zero_temperature = i % 10 == 0;
        const ModeTable table(p);
        const EchoPoint e = echo_point(table, time(rng));
        worst = std::min({worst, e.le - e.lower, e.upper - e.le});
        const EchoPoint z = echo_point(table, 0.0);
        t0 = std::max({t0, std::abs(z.lower - 1.0), std::abs(z.upper - 1.0)});
    }
    r.worst = worst;
    r.passed = worst >= r.threshold && t0 <= 1e-12;
    r.detail = {{"samples", n}, {"max_t0_deviation", t0}};
    return r;
}

SuiteResult verify_qubit_inequality(const VerifyOptions& o) {
    SuiteResult r{"qubit_inequality", false, "min of F - Tr[U rho U^+ rho] / Tr[rho^2]", 0.0, -1e-12, {}};
    const QubitReport q = qubit_inequality_check(o.quick ? 10000 : 100000, o.seed + 2);
    r.worst = q.min_slack;
    r.passed = q.passed(1e-12);
    r.detail = {{"trials", q.trials},
                {"violations", q.violations},
                {"closed_form_error", q.max_closed_form_error},
                {"two_level_formula_error", q.max_hubner_error}};
    return r;
}

SuiteResult verify_q_function(const VerifyOptions& o) {
    SuiteResult r{"q_function", false, "grid minimum of Q(x, v)", 0.0, -1e-12, {}};
    const std::size_t n = o.quick ? 200 : 1000;
    const QScanReport q = q_function_scan(n, n);
    r.worst = q.minimum;
    r.passed = q.passed(1e-12);
    r.detail = {{"points", q.points},
                {"argmin_x", q.argmin_x},
                {"argmin_v", q.argmin_v},
                {"max_abs_at_v0", q.max_abs_at_v0},
                {"max_concavity_excess", q.max_concavity_excess}};
    return r;
}

SuiteResult verify_perturbation_scaling(const VerifyOptions& o) {
    SuiteResult r{"perturbation_scaling", false, "max |error ratio per halving - 8| / 8", 0.0, 0.3, {}};
    const int instances = o.quick ? 1 : 3;
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.5 * i);
    nlohmann::json ratios = nlohmann::json::array();
    double worst = 0.0;
    double damping_lo = 0.0, damping_hi = 1.0, cold = 0.0;
    for (int k = 0; k < instances; ++k) {
        const DenseOperator h0 = random_hermitian(8, 1.0, o.seed + 10 + 2 * static_cast<std::uint64_t>(k));
        const DenseOperator v0 = random_hermitian(8, 1.0, o.seed + 11 + 2 * static_cast<std::uint64_t>(k));
        double prev = 0.0;
        double scale = 1e-2;
        for (int h = 0; h < 4; ++h, scale *= 0.5) {
            const DenseOperator v(scale * v0.entries(), true);
            const DenseOperator h1(h0.entries() + v.entries(), true);
            const PerturbationReport rep = perturbation_report(h0, v, 1.0);
            const EchoOracle oracle(h0, h1, 1.0);
            double err = 0.0;
            for (double t : times) err = std::max(err, std::abs(oracle.loschmidt(t) - perturbative_le(rep, t)));
            if (h > 0) {
                const double ratio = prev / err;
                ratios.push_back(ratio);
                worst = std::max(worst, std::abs(ratio - 8.0) / 8.0);
            }
            prev = err;
            damping_lo = std::min(damping_lo, rep.damping.minCoeff());
            damping_hi = std::max(damping_hi, rep.damping.maxCoeff());
        }
        const RealVector d = damping_generic(h0, v0, 1e4).damping;
        cold = std::max(cold, (d.tail(d.size() - 1).array() - 1.0).abs().maxCoeff());
    }
    r.worst = worst;
    r.passed = worst <= r.threshold && damping_lo >= 0.0 && damping_hi <= 1.0 && cold < 1e-6;
    r.detail = {{"ratios", ratios}, {"damping_min", damping_lo}, {"damping_max", damping_hi},
                {"cold_damping_deviation", cold}};
    return r;
}

SuiteResult verify_bures_relation(const VerifyOptions& o) {
    SuiteResult r{"bures_relation", false, "max |F^2 - (lbar - ds2_fr / 2)| at coupling 1e-3", 0.0, 1e-8, {}};
    const int instances = o.quick ? 1 : 3;
    double worst = 0.0;
    for (int k = 0; k < instances; ++k) {
        const DenseOperator h0 = random_hermitian(8, 1.0, o.seed + 10 + 2 * static_cast<std::uint64_t>(k));
        const DenseOperator v0 = random_hermitian(8, 1e-3, o.seed + 11 + 2 * static_cast<std::uint64_t>(k));
        worst = std::max(worst, std::abs(bures_relation_residual(h0, v0, 1.0)));
    }
    r.worst = worst;
    r.passed = worst < r.threshold;
    r.detail = {{"instances", instances}};
    return r;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& o) {
    return {verify_oracle_equivalence(o), verify_bounds(o),        verify_qubit_inequality(o),
            verify_q_function(o),         verify_perturbation_scaling(o), verify_bures_relation(o)};
}

nlohmann::json to_json(const SuiteResult& r) {
    return {{"name", r.name},         {"passed", r.passed},       {"metric", r.metric},
            {"worst", r.worst},       {"threshold", r.threshold}, {"detail", r.detail}};
}

int cmd_verify(const RunConfig& c, std::ostream& log) {
    VerifyOptions o;
    o.seed = c.seed;
    o.quick = c.quick;
    o.inject_fault = c.inject_fault;
    const auto results = run_verification(o);
    bool all = true;
    nlohmann::json suites = nlohmann::json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        suites.push_back(to_json(r));
        log << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << format_double(r.worst)
            << " threshold=" << format_double(r.threshold) << "\n";
    }
    write_json(c.output + ".verify.json",
               {{"config", to_json(c)}, {"passed", all}, {"suites", suites}});
    return all ? kExitOk : kExitVerification;
}

}  // namespace lecho::cli
