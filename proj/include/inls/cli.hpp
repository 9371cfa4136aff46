#pragma once

#include <string>
#include <vector>

namespace inls {

/// Command-line entry point. Subcommands: exponents, simulate, norms, split,
/// global-run, corpus, replay. Exit codes: 0 ok, 2 hypothesis violation,
/// 3 numerical failure, 4 I/O or usage error. Partial outputs are removed
/// when a run fails.
int run_cli(std::vector<std::string> args);

}  // namespace inls
