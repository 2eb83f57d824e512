#include "cli/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <threshreg/errors.hpp>
#include <threshreg/version.hpp>

namespace threshreg::cli {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson provenance(const RunConfig& cfg) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  ojson p;
  p["version"] = version_string;
  p["seed"] = cfg.seed;
  p["config_hash"] = hash;
  p["config"] = canonical_config(cfg);
  return p;
}

namespace {

std::string scalar_text(const ojson& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();  // integers, booleans, null
}

bool is_table(const ojson& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& row : v)
    if (!row.is_object()) return false;
  return true;
}

void flatten(const ojson& node, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : node.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, path, os);
    } else if (is_table(value)) {
      os << "#" << path;
      for (const auto& [col, cell] : value.front().items()) os << '\t' << col;
      os << '\n';
      for (const auto& row : value) {
        bool first = true;
        for (const auto& [col, cell] : row.items()) {
          os << (first ? "" : "\t") << scalar_text(cell);
          first = false;
        }
        os << '\n';
      }
    } else if (value.is_array()) {
      os << path << '\t';
      for (std::size_t i = 0; i < value.size(); ++i)
        os << (i ? "," : "") << scalar_text(value[i]);
      os << '\n';
    } else {
      os << path << '\t' << scalar_text(value) << '\n';
    }
  }
}

}  // namespace

std::string to_tsv(const ojson& report) {
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

void emit_report(const ojson& report, const RunConfig& cfg) {
  std::string text;
  if (cfg.format == "json")
    text = report.dump(2) + "\n";
  else if (cfg.format == "tsv")
    text = to_tsv(report);
  else
    throw DomainError("unknown output format '" + cfg.format + "'");

  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + cfg.out + "' for writing");
  out << text;
  if (!out) throw ParseError("write failed for '" + cfg.out + "'");
}

void write_tsv_table(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw DimensionMismatch("write_tsv_table: header/column count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "\t" : "") << header[j];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows)
      throw DimensionMismatch("write_tsv_table: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "\t" : "") << format_number(columns[j][r]);
    out << '\n';
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

std::string companion_path(const std::string& out, const std::string& suffix) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  std::string stem = out;
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    stem = out.substr(0, dot);
  return stem + suffix + ".tsv";
}

}  // namespace threshreg::cli
