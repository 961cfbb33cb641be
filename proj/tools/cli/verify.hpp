#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace lecho::cli {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string metric;  ///< what "worst" measures
    double worst = 0.0;
    double threshold = 0.0;
    nlohmann::json detail;
};

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    /// Smaller sample counts for smoke runs.
    bool quick = false;
    /// Perturbs the product formula inside the oracle suite so it must fail.
    bool inject_fault = false;
};

[[nodiscard]] SuiteResult verify_oracle_equivalence(const VerifyOptions& options);
[[nodiscard]] SuiteResult verify_bounds(const VerifyOptions& options);
[[nodiscard]] SuiteResult verify_qubit_inequality(const VerifyOptions& options);
[[nodiscard]] SuiteResult verify_q_function(const VerifyOptions& options);
[[nodiscard]] SuiteResult verify_perturbation_scaling(const VerifyOptions& options);
[[nodiscard]] SuiteResult verify_bures_relation(const VerifyOptions& options);

[[nodiscard]] std::vector<SuiteResult> run_verification(const VerifyOptions& options);
[[nodiscard]] nlohmann::json to_json(const SuiteResult& r);

/// Runs every suite, writes <output>.verify.json and returns 0 or kExitVerification.
int cmd_verify(const RunConfig& config, std::ostream& log);

}  // namespace lecho::cli
