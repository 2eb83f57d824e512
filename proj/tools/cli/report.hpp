// report.hpp
//
// Machine-readable output.  Every command assembles an ordered JSON
// document; the TSV rendering flattens it (dotted keys, '#'-headed blocks
// for tables) so both formats carry the same numbers.  Provenance — tool
// version, seed, canonical config and its hash — rides along in every
// report; nothing time- or host-dependent is ever written.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace threshreg::cli {

using ojson = nlohmann::ordered_json;

ojson provenance(const RunConfig& cfg);

// %.17g: exact double round-trip, identical across runs.
std::string format_number(double v);

std::string to_tsv(const ojson& report);

// Renders per cfg.format to cfg.out, or to stdout when out is empty.
void emit_report(const ojson& report, const RunConfig& cfg);

// Companion table file (always TSV), e.g. the confidence-curve plot data.
void write_tsv_table(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

// "dir/name.ext" -> "dir/name<suffix>.tsv" for companion files.
std::string companion_path(const std::string& out, const std::string& suffix);

}  // namespace threshreg::cli
