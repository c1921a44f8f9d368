#pragma once

namespace uhlab {

// Command-line entry point behind the executable. Subcommands:
//   solve  — run the first grid entry, write mesh/solution/report files
//   sweep  — run the whole grid, write sweep.csv / sweep.json
//   check  — run randomized property checks (positional suite, --samples)
// Shared flags: --config, --out, --jobs, --seed, --print-defaults.
// Exit codes: 0 success, 1 failed checks or I/O trouble, 2 malformed
// arguments/config (field-path diagnostics on stderr), 3 solver failure.
int run_cli(int argc, const char* const* argv);

} // namespace uhlab
