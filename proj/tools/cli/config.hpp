// config.hpp
//
// Run configuration shared by the subcommands: where the data lives, which
// columns play which role, and every knob that affects a number in the
// output.  The canonical serialization below is hashed into the report so
// a result can always be traced back to the exact configuration.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace threshreg::cli {

// A column reference "name" or "name:lagK" (use the value from K rows back).
struct ColumnSpec {
  std::string name;
  int lag = 0;
};

ColumnSpec parse_column_spec(const std::string& text);

struct RunConfig {
  // Data ingestion.
  std::string input_path;
  std::string response;                 // plain column name
  std::vector<std::string> regressors;  // specs, each "name" or "name:lagK"
  std::string threshold_var;            // spec; placed last in the design
  int lag = 0;  // shortcut: lag the threshold variable by this much and add
                // the response lagged by the same amount as a regressor

  // Grid and kernel.
  double trim = 0.05;
  int grid_points = 0;        // 0 = default rule (about n/2)
  std::string kernel = "epanechnikov";  // or "gaussian"
  double bandwidth = 0.0;     // 0 = rule-of-thumb

  // Resampling.
  int boot_reps = 399;
  std::string multiplier = "rademacher";  // or "normal"
  std::uint64_t seed = 20240801;
  int threads = 0;

  // Reporting.
  std::vector<double> levels = {0.95};
  std::string format = "tsv";  // or "json"
  std::string out;             // empty = stdout (report only)

  // Simulation runs.
  std::string design = "B";        // A | B | C | D
  std::string experiment = "size"; // size | coverage | power
  int n = 250;
  int replications = 1000;
  double gamma0 = 2.0;             // threshold (A/B), sample fraction (D)
  double q_mean = 0.0;             // design C location
  std::vector<double> delta_multipliers = {1.0};
  int quantile_points = 10;
};

// Deterministic one-line rendering of every field that can change a result.
std::string canonical_config(const RunConfig& cfg);

// FNV-1a over the canonical rendering.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace threshreg::cli
