#pragma once

#include <ostream>

namespace mtsf::cli {

/// Runs the `mtsf` command line (simulate, estimate, select, experiment,
/// theory). Returns the process exit code; results go to `out` unless an
/// output file is named, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtsf::cli
