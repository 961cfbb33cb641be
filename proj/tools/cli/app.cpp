#include "app.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "lecho/error.hpp"
#include "verify.hpp"

namespace lecho::cli {

namespace {

struct Overrides {
    std::string config_path;
    std::optional<int> length;
    std::optional<double> h0, h1, gamma0, gamma1, beta, temperature;
    std::optional<double> tmax, tau_factor;
    std::optional<std::size_t> n_times, samples, bins;
    std::optional<std::uint64_t> seed;
    std::vector<double> temperatures;
    std::optional<double> dominance_threshold, separation_factor;
    bool bell = false;
    bool second_order = false;
    std::vector<std::string> sweep;
    bool quick = false;
    bool inject_fault = false;
    std::optional<std::string> output, format;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON run configuration; flags override its fields");
    sub->add_option("--length", o.length, "chain length L (even)");
    sub->add_option("--h0", o.h0, "pre-quench field");
    sub->add_option("--h1", o.h1, "post-quench field");
    sub->add_option("--gamma0", o.gamma0, "pre-quench anisotropy");
    sub->add_option("--gamma1", o.gamma1, "post-quench anisotropy");
    auto* beta = sub->add_option("--beta", o.beta, "inverse temperature");
    sub->add_option("--temperature", o.temperature, "temperature (0 selects the ground state)")->excludes(beta);
    sub->add_option("--seed", o.seed, "64-bit random seed");
    sub->add_option("--output", o.output, "output path stem");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.length) c.params.length = *o.length;
    if (o.h0) c.params.h0 = *o.h0;
    if (o.h1) c.params.h1 = *o.h1;
    if (o.gamma0) c.params.gamma0 = *o.gamma0;
    if (o.gamma1) c.params.gamma1 = *o.gamma1;
    if (o.beta) {
        c.params.beta = *o.beta;
        c.params.zero_temperature = false;
    }
    if (o.temperature) set_temperature(c.params, *o.temperature);
    if (o.tmax) c.tmax = *o.tmax;
    if (o.n_times) c.n_times = *o.n_times;
    if (o.tau_factor) c.tau_factor = *o.tau_factor;
    if (o.samples) c.n_samples = *o.samples;
    if (o.bins) c.bins = *o.bins;
    if (o.seed) c.seed = *o.seed;
    if (!o.temperatures.empty()) c.temperatures = o.temperatures;
    if (o.dominance_threshold) c.dominance_threshold = *o.dominance_threshold;
    if (o.separation_factor) c.separation_factor = *o.separation_factor;
    if (o.bell) c.bell = true;
    if (o.second_order) c.second_order = true;
    if (!o.sweep.empty()) {
        c.sweep.clear();
        for (const auto& s : o.sweep) c.sweep.push_back(parse_axis(s));
    }
    if (o.quick) c.quick = true;
    if (o.inject_fault) c.inject_fault = true;
    if (o.output) c.output = *o.output;
    if (o.format) c.format = parse_format(*o.format);
    return c;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-temperature Loschmidt echo of quenched XY chains", "lecho"};
    app.require_subcommand(1);
    Overrides o;

    auto* ts = app.add_subcommand("timeseries", "echo, linearized echo and bounds on a time grid");
    add_common(ts, o);
    ts->add_option("--tmax", o.tmax, "end of the time grid");
    ts->add_option("--times", o.n_times, "number of grid points");

    auto* dist = app.add_subcommand("distribution", "sampled distribution of ln L and its classification");
    add_common(dist, o);
    dist->add_option("--tau-factor", o.tau_factor, "sampling horizon in units of L^2");
    dist->add_option("--samples", o.samples, "number of sampled times");
    dist->add_option("--bins", o.bins, "histogram bins (0 = Freedman-Diaconis)");
    dist->add_option("--temperatures", o.temperatures, "temperature ladder")->delimiter(',');
    dist->add_option("--dominance-threshold", o.dominance_threshold, "share of the two largest weights");
    dist->add_option("--separation-factor", o.separation_factor, "peak gap in units of sigma_rest");
    dist->add_flag("--second-order", o.second_order, "weights from dtheta^2 instead of sin^2");

    auto* wt = app.add_subcommand("weights", "per-mode weights and damping factors");
    add_common(wt, o);
    wt->add_flag("--bell", o.bell, "add the continuum bell curve and its inflection width");
    wt->add_flag("--second-order", o.second_order, "weights from dtheta^2 instead of sin^2");

    auto* sc = app.add_subcommand("scan", "Cartesian parameter sweep, one summary row per point");
    add_common(sc, o);
    sc->add_option("--sweep", o.sweep, "axis as name:lo:hi:n (repeatable)");
    sc->add_option("--dominance-threshold", o.dominance_threshold, "share of the two largest weights");
    sc->add_option("--separation-factor", o.separation_factor, "peak gap in units of sigma_rest");

    auto* vf = app.add_subcommand("verify", "oracle, bound and appendix verification suites");
    add_common(vf, o);
    vf->add_flag("--quick", o.quick, "reduced sample counts");
    vf->add_flag("--inject-fault", o.inject_fault, "break the product formula to exercise the failure path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::Success&) {
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        const RunConfig c = resolve(o);
        if (ts->parsed()) return cmd_timeseries(c, out);
        if (dist->parsed()) return cmd_distribution(c, err);
        if (wt->parsed()) return cmd_weights(c, out);
        if (sc->parsed()) return cmd_scan(c, out);
        return cmd_verify(c, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace lecho::cli
