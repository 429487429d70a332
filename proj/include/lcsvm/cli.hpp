#pragma once

namespace lcsvm {

// Batch front end: gensynth, cv, train, classify, ensemble-train, vote,
// evaluate, render. Returns 0 on success, 1 on domain errors (one-line
// diagnostic on stderr), 2 on unknown subcommands or flags.
int run_cli(int argc, const char* const* argv);

}  // namespace lcsvm
