#pragma once

#include <ostream>

namespace lecho::cli {

/// Parses arguments, runs the chosen subcommand and maps failures to exit
/// codes: 0 success, 1 validation, 2 verification failure, 3 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lecho::cli
