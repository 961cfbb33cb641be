#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lecho/model.hpp"

namespace lecho::cli {

inline constexpr std::uint64_t kDefaultSeed = 20100917;

enum class OutputFormat { Csv, Json };

/// One axis of a Cartesian parameter sweep: n evenly spaced values on [lo, hi].
struct SweepAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 1;

    [[nodiscard]] std::vector<double> values() const;
};

struct RunConfig {
    QuenchParams params;

    // timeseries
    double tmax = 50.0;
    std::size_t n_times = 1001;

    // distribution
    double tau_factor = 100.0;
    std::size_t n_samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t bins = 200;
    std::vector<double> temperatures;
    double dominance_threshold = 0.6;
    double separation_factor = 3.0;

    // weights
    bool bell = false;
    bool second_order = false;

    // scan
    std::vector<SweepAxis> sweep;

    // verify
    bool quick = false;
    bool inject_fault = false;

    std::string output = "lecho";
    OutputFormat format = OutputFormat::Csv;

    /// Throws ValidationError on any inconsistent field.
    void validate() const;
};

/// Sets beta from a temperature; T = 0 selects the ground state.
void set_temperature(QuenchParams& params, double temperature);

[[nodiscard]] nlohmann::json to_json(const RunConfig& config);
/// Keys must be RunConfig field names; "temperature" is accepted in place of
/// "beta". Unknown keys are rejected.
[[nodiscard]] RunConfig from_json(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Parses "name:lo:hi:n".
[[nodiscard]] SweepAxis parse_axis(const std::string& spec);

[[nodiscard]] std::string to_string(OutputFormat f);
[[nodiscard]] OutputFormat parse_format(const std::string& s);

}  // namespace lecho::cli
