#pragma once

#include <ostream>

#include "run_config.hpp"

namespace lecho::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitVerification = 2,
    kExitIo = 3,
};

/// Echo, linearized echo and both bounds on a uniform grid over [0, tmax];
/// writes <output>.csv (or .json) and <output>.summary.json.
int cmd_timeseries(const RunConfig& config, std::ostream& log);

/// Seeded samples of ln L, histogram and classification for each ladder
/// temperature; writes <output>.T<i>.samples.*, <output>.T<i>.hist.* and
/// <output>.classification.json.
int cmd_distribution(const RunConfig& config, std::ostream& log);

/// Per-mode weights, damping factors and optionally the continuum bell curve;
/// writes <output>.csv (or .json) and <output>.summary.json.
int cmd_weights(const RunConfig& config, std::ostream& log);

/// One summary row per point of the Cartesian sweep; writes <output>.csv (or .json).
int cmd_scan(const RunConfig& config, std::ostream& log);

}  // namespace lecho::cli
