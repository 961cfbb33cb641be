#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "io.hpp"
#include "lecho/error.hpp"

namespace lecho::cli {

namespace {

const std::set<std::string> kAxisNames{"length", "h0", "h1", "gamma0", "gamma1", "beta", "temperature"};

const std::set<std::string> kKeys{"length",      "h0",         "h1",
                                  "gamma0",      "gamma1",     "beta",
                                  "temperature", "zero_temperature", "tmax",
                                  "n_times",     "tau_factor", "n_samples",
                                  "seed",        "bins",       "temperatures",
                                  "dominance_threshold", "separation_factor", "bell",
                                  "second_order", "sweep",     "quick",
                                  "inject_fault", "output",    "format"};

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

void set_temperature(QuenchParams& params, double temperature) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw ValidationError("temperature must be finite and non-negative");
    if (temperature == 0.0) {
        params.zero_temperature = true;
    } else {
        params.zero_temperature = false;
        params.beta = 1.0 / temperature;
    }
}

void RunConfig::validate() const {
    params.validate();
    if (!(tmax >= 0.0) || !std::isfinite(tmax)) throw ValidationError("tmax must be finite and non-negative");
    if (n_times < 1) throw ValidationError("n_times must be at least 1");
    if (!(tau_factor > 0.0) || !std::isfinite(tau_factor)) throw ValidationError("tau_factor must be positive");
    if (n_samples < 1) throw ValidationError("samples must be at least 1");
    for (double t : temperatures)
        if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("ladder temperatures must be non-negative");
    if (!(dominance_threshold > 0.0 && dominance_threshold < 1.0))
        throw ValidationError("dominance_threshold must lie in (0, 1)");
    if (!(separation_factor >= 0.0)) throw ValidationError("separation_factor must be non-negative");
    for (const auto& a : sweep) {
        if (!kAxisNames.count(a.name)) throw ValidationError("unknown sweep axis '" + a.name + "'");
        if (a.n < 1) throw ValidationError("sweep axis '" + a.name + "' is empty");
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw ValidationError("sweep range must be finite");
    }
    if (output.empty()) throw ValidationError("output path is empty");
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json sweep = nlohmann::json::array();
    for (const auto& a : c.sweep) sweep.push_back({{"name", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"n", a.n}});
    return {{"length", c.params.length},
            {"h0", c.params.h0},
            {"h1", c.params.h1},
            {"gamma0", c.params.gamma0},
            {"gamma1", c.params.gamma1},
            {"beta", c.params.beta},
            {"zero_temperature", c.params.zero_temperature},
            {"tmax", c.tmax},
            {"n_times", c.n_times},
            {"tau_factor", c.tau_factor},
            {"n_samples", c.n_samples},
            {"seed", c.seed},
            {"bins", c.bins},
            {"temperatures", c.temperatures},
            {"dominance_threshold", c.dominance_threshold},
            {"separation_factor", c.separation_factor},
            {"bell", c.bell},
            {"second_order", c.second_order},
            {"sweep", sweep},
            {"quick", c.quick},
            {"inject_fault", c.inject_fault},
            {"output", c.output},
            {"format", to_string(c.format)}};
}

RunConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kKeys.count(key)) throw ValidationError("unknown config field '" + key + "'");
    if (j.contains("beta") && j.contains("temperature"))
        throw ValidationError("config sets both beta and temperature");

    RunConfig c;
    read(j, "length", c.params.length);
    read(j, "h0", c.params.h0);
    read(j, "h1", c.params.h1);
    read(j, "gamma0", c.params.gamma0);
    read(j, "gamma1", c.params.gamma1);
    read(j, "beta", c.params.beta);
    read(j, "zero_temperature", c.params.zero_temperature);
    if (j.contains("temperature")) {
        double t = 0.0;
        read(j, "temperature", t);
        set_temperature(c.params, t);
    }
    read(j, "tmax", c.tmax);
    read(j, "n_times", c.n_times);
    read(j, "tau_factor", c.tau_factor);
    read(j, "n_samples", c.n_samples);
    read(j, "seed", c.seed);
    read(j, "bins", c.bins);
    read(j, "temperatures", c.temperatures);
    read(j, "dominance_threshold", c.dominance_threshold);
    read(j, "separation_factor", c.separation_factor);
    read(j, "bell", c.bell);
    read(j, "second_order", c.second_order);
    read(j, "quick", c.quick);
    read(j, "inject_fault", c.inject_fault);
    read(j, "output", c.output);
    if (j.contains("format")) {
        std::string f;
        read(j, "format", f);
        c.format = parse_format(f);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_array()) throw ValidationError("config field 'sweep' must be an array");
        for (const auto& a : s) {
            SweepAxis axis;
            read(a, "name", axis.name);
            read(a, "lo", axis.lo);
            read(a, "hi", axis.hi);
            read(a, "n", axis.n);
            c.sweep.push_back(axis);
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

SweepAxis parse_axis(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw ValidationError("sweep axis must look like name:lo:hi:n, got '" + spec + "'");
    SweepAxis a;
    a.name = parts[0];
    if (!kAxisNames.count(a.name)) throw ValidationError("unknown sweep axis '" + a.name + "'");
    try {
        std::size_t pos = 0;
        a.lo = std::stod(parts[1], &pos);
        if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
        a.hi = std::stod(parts[2], &pos);
        if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
        const long long n = std::stoll(parts[3], &pos);
        if (pos != parts[3].size() || n < 1) throw std::invalid_argument(parts[3]);
        a.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        throw ValidationError("bad number in sweep axis '" + spec + "'");
    }
    return a;
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ValidationError("format must be csv or json, got '" + s + "'");
}

}  // namespace lecho::cli
