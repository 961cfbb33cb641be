#include "commands.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "io.hpp"
#include "lecho/averages.hpp"
#include "lecho/echo.hpp"
#include "lecho/error.hpp"
#include "lecho/stats.hpp"

namespace lecho::cli {

namespace {

std::string comment_line(const std::string& command, const RunConfig& c, const std::string& extra = {}) {
    std::string s = "lecho " + command + " config=" + to_json(c).dump() + " seed=" + std::to_string(c.seed);
    if (!extra.empty()) s += " " + extra;
    return s;
}

std::string extension(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

void write_table(const std::string& path, const Table& t, const RunConfig& c, const std::string& comment) {
    if (c.format == OutputFormat::Csv)
        write_text(path, render_csv(t, comment));
    else
        write_json(path, render_json(t, comment));
}

Cell num(std::size_t x) { return static_cast<std::int64_t>(x); }

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

nlohmann::json averages_json(const ModeTable& table) {
    const AverageReport r = average_report(table);
    const EffectiveDimension d = effective_dimension(table);
    return {{"d_eff", finite_or_null(r.d_eff)},
            {"log_d_eff", d.log_d_eff},
            {"purity", d.purity},
            {"mean_le", r.mean_le},
            {"mean_lef", r.mean_lef},
            {"var_le", r.var_le},
            {"smallquench_var", r.smallquench_var},
            {"series_fallback_modes", r.series_fallback_modes},
            {"short_time_coefficient", short_time_coefficient(table)}};
}

enum class BellKind { Ising, Anisotropy };

// Ising line: gamma = 1 on both sides. Anisotropy line: h = 0 on both sides.
std::optional<BellKind> bell_kind(const QuenchParams& p) {
    if (p.gamma0 == 1.0 && p.gamma1 == 1.0) return BellKind::Ising;
    if (p.h0 == 0.0 && p.h1 == 0.0) return BellKind::Anisotropy;
    return std::nullopt;
}

}  // namespace

int cmd_timeseries(const RunConfig& c, std::ostream& /*log*/) {
    c.validate();
    const ModeTable table(c.params);
    std::vector<double> times(c.n_times);
    for (std::size_t i = 0; i < c.n_times; ++i)
        times[i] = c.n_times == 1 ? 0.0 : c.tmax * static_cast<double>(i) / static_cast<double>(c.n_times - 1);
    const auto points = echo_series(table, times);

    Table t{{"t", "le", "lef", "lower", "upper"}, {}};
    t.rows.reserve(points.size());
    for (const auto& p : points) t.rows.push_back({p.t, p.le, p.lef, p.lower, p.upper});
    const std::string comment = comment_line("timeseries", c);
    write_table(c.output + extension(c.format), t, c, comment);

    nlohmann::json summary = averages_json(table);
    summary["config"] = to_json(c);
    write_json(c.output + ".summary.json", summary);
    return kExitOk;
}

int cmd_distribution(const RunConfig& c, std::ostream& log) {
    c.validate();
    std::vector<double> ladder = c.temperatures;
    if (ladder.empty()) ladder.push_back(c.params.temperature());

    ClassifierConfig cc;
    cc.bins = c.bins;
    cc.dominance_threshold = c.dominance_threshold;
    cc.separation_factor = c.separation_factor;

    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        QuenchParams p = c.params;
        set_temperature(p, ladder[i]);
        const ModeTable table(p);
        const WeightSpectrum spectrum = weights(table, c.second_order);
        const double tau = default_tau(p.length, c.tau_factor);
        const SampleSet samples = sample_logle(table, tau, c.n_samples, c.seed);
        const Classification cls = classify(spectrum, samples, cc);
        const Moments m = sample_moments(samples.z);
        const std::string tag = ".T" + std::to_string(i);
        const std::string extra = "temperature=" + format_double(ladder[i]) + " tau=" + format_double(tau);

        Table st{{"t", "z"}, {}};
        st.rows.reserve(samples.z.size());
        for (std::size_t j = 0; j < samples.z.size(); ++j) st.rows.push_back({samples.times[j], samples.z[j]});
        write_table(c.output + tag + ".samples" + extension(c.format), st, c,
                    comment_line("distribution", c, extra));

        const Histogram h = histogram(samples.z, c.bins);
        const std::vector<double> smooth = moving_average(h.counts, cc.peaks.window);
        Table ht{{"center", "count", "density", "smoothed"}, {}};
        for (std::size_t j = 0; j < h.size(); ++j)
            ht.rows.push_back({h.center(j), num(h.counts[j]), h.density(j, samples.z.size()), smooth[j]});
        write_table(c.output + tag + ".hist" + extension(c.format), ht, c, comment_line("distribution", c, extra));

        if (cls.degenerate)
            log << "warning: temperature " << format_double(ladder[i])
                << ": all weights vanish, ln L has zero variance; classification is degenerate\n";

        nlohmann::json peaks = nlohmann::json::array();
        for (const auto& pk : cls.peaks) peaks.push_back({{"location", pk.location}, {"prominence", pk.prominence}});
        entries.push_back({{"temperature", ladder[i]},
                           {"tau", tau},
                           {"label", std::string(to_string(cls.label))},
                           {"weight_label", std::string(to_string(cls.weight_label))},
                           {"degenerate", cls.degenerate},
                           {"dominance", cls.dominance},
                           {"kappa2", cls.kappa2},
                           {"zbar", cls.zbar},
                           {"a1", cls.a1},
                           {"a2", cls.a2},
                           {"sigma_rest", cls.sigma_rest},
                           {"predicted_peaks", {cls.predicted_low, cls.predicted_high}},
                           {"histogram_checked", cls.histogram_checked},
                           {"histogram_peaks", peaks},
                           {"moments",
                            {{"mean", m.mean},
                             {"variance", m.variance},
                             {"skewness", m.skewness},
                             {"excess_kurtosis", m.excess_kurtosis}}}});
        log << "T=" << format_double(ladder[i]) << " label=" << to_string(cls.label)
            << " dominance=" << format_double(cls.dominance) << "\n";
    }
    write_json(c.output + ".classification.json", {{"config", to_json(c)}, {"ladder", entries}});
    return kExitOk;
}

int cmd_weights(const RunConfig& c, std::ostream& log) {
    c.validate();
    const ModeTable table(c.params);
    const WeightSpectrum w = weights(table, c.second_order);

    std::optional<BellKind> kind;
    if (c.bell) {
        kind = bell_kind(c.params);
        if (!kind)
            throw ValidationError("bell curve needs gamma0 = gamma1 = 1 (Ising) or h0 = h1 = 0 (anisotropy)");
    }

    Table t{{"k", "omega", "a", "a_f", "damping1", "damping2"}, {}};
    if (kind) {
        t.header.push_back("lambda_pre");
        t.header.push_back("sin2_dtheta");
        t.header.push_back("bell");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::vector<Cell> row{w.k[i], w.omega[i], w.a[i], w.a_f[i], w.damping1[i], w.damping2[i]};
        if (kind) {
            const auto& m = table[i];
            const double lam = m.pre.lambda;
            const double bell = *kind == BellKind::Ising
                                    ? bell_ising(lam, c.params.h0, c.params.h1 - c.params.h0)
                                    : bell_aniso(lam, c.params.gamma0, c.params.gamma1 - c.params.gamma0);
            row.push_back(lam);
            row.push_back(m.alpha);
            row.push_back(bell);
        }
        t.rows.push_back(std::move(row));
    }
    write_table(c.output + extension(c.format), t, c, comment_line("weights", c));

    nlohmann::json summary = {{"config", to_json(c)},
                              {"zbar", w.zbar()},
                              {"zbar_f", w.zbar_f()},
                              {"kappa2", w.kappa2()}};
    if (kind) {
        const bool ising = *kind == BellKind::Ising;
        const double gap = ising ? std::abs(1.0 - c.params.h0) : std::abs(c.params.gamma0);
        const double width = ising ? ising_inflection_width(c.params.h0) : aniso_inflection_width(c.params.gamma0);
        summary["bell"] = {{"kind", ising ? "ising" : "anisotropy"},
                           {"inflection_width", width},
                           {"gap", gap},
                           {"width_over_gap", width / gap}};
        log << "inflection width " << format_double(width) << " = " << format_double(width / gap) << " x gap\n";
    }
    write_json(c.output + ".summary.json", summary);
    return kExitOk;
}

int cmd_scan(const RunConfig& c, std::ostream& /*log*/) {
    c.validate();
    if (c.sweep.empty()) throw ValidationError("scan needs at least one sweep axis");

    std::vector<std::vector<double>> axes;
    Table t;
    for (const auto& a : c.sweep) {
        axes.push_back(a.values());
        t.header.push_back(a.name);
    }
    for (const char* col : {"d_eff", "mean_le", "mean_lef", "var_le", "short_time_coefficient", "kappa2", "dominance",
                            "weight_label"})
        t.header.emplace_back(col);

    ClassifierConfig cc;
    cc.dominance_threshold = c.dominance_threshold;
    cc.separation_factor = c.separation_factor;

    std::size_t total = 1;
    for (const auto& v : axes) total *= v.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        // Last axis varies fastest.
        std::vector<std::size_t> idx(axes.size());
        std::size_t rest = flat;
        for (std::size_t a = axes.size(); a-- > 0;) {
            idx[a] = rest % axes[a].size();
            rest /= axes[a].size();
        }
        QuenchParams p = c.params;
        std::vector<Cell> row;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double v = axes[a][idx[a]];
            const std::string& name = c.sweep[a].name;
            if (name == "length") {
                const double r = std::round(v);
                if (r != v) throw ValidationError("length axis must take integer values");
                p.length = static_cast<int>(r);
            } else if (name == "h0") {
                p.h0 = v;
            } else if (name == "h1") {
                p.h1 = v;
            } else if (name == "gamma0") {
                p.gamma0 = v;
            } else if (name == "gamma1") {
                p.gamma1 = v;
            } else if (name == "beta") {
                p.beta = v;
                p.zero_temperature = false;
            } else {
                set_temperature(p, v);
            }
            row.push_back(v);
        }
        const ModeTable table(p);
        const AverageReport r = average_report(table);
        const WeightSpectrum w = weights(table, c.second_order);
        const Classification cls = classify(w, SampleSet{}, cc);
        row.insert(row.end(), {r.d_eff, r.mean_le, r.mean_lef, r.var_le, short_time_coefficient(table), w.kappa2(),
                               cls.dominance, std::string(to_string(cls.weight_label))});
        t.rows.push_back(std::move(row));
    }
    write_table(c.output + extension(c.format), t, c, comment_line("scan", c));
    return kExitOk;
}

}  // namespace lecho::cli
