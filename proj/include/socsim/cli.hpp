#pragma once

#include <optional>
#include <string>

#include "socsim/engine.hpp"
#include "socsim/metrics.hpp"

namespace socsim {

/// Command-line entry point (subcommands: run, controls, eval, classify).
/// Returns the process exit code: 0 success, 1 invalid scenario or I/O
/// error, 2 provider failure.
int run_cli(int argc, const char* const* argv);

/// Writes a complete run bundle into dir: trajectory.tsv, attitudes.tsv,
/// run_log.ndjson, overview.svg, and bundle.json (config snapshot, seed,
/// tool version, optional metric report).
void write_bundle(const RunResult& result, const std::string& dir,
                  const std::optional<MetricReport>& metrics = std::nullopt);

} // namespace socsim
