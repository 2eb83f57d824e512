// commands.hpp
//
// The four workflows behind the subcommands.  Each returns the full report
// document so tests can compare CLI output against direct library calls;
// emitting to disk/stdout is the caller's job (run_ci additionally writes
// its plot-data companion when an output path is set).

#pragma once

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace threshreg::cli {

ojson run_estimate(const RunConfig& cfg);
ojson run_continuity(const RunConfig& cfg);
ojson run_ci(const RunConfig& cfg);
ojson run_simulate(const RunConfig& cfg);

}  // namespace threshreg::cli
