// csv.hpp
//
// CSV ingestion (header required, '.' decimal, quoted fields supported) and
// the matching writer.  The loader maps column roles from the RunConfig,
// builds lagged copies where requested, adds the intercept, and places the
// threshold variable in the last design column.

#pragma once

#include <string>
#include <vector>

#include <threshreg/dataset.hpp>

#include "cli/config.hpp"

namespace threshreg::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // raw cells, header excluded
};

// Parses the file into raw cells.  Throws ParseError on IO failure, a
// missing header, unbalanced quotes, or ragged rows.
CsvTable read_csv(const std::string& path);

struct LoadedData {
  Dataset ds;
  std::string y_name;
  std::vector<std::string> x_names;  // size k, "const" first, threshold last
  int dropped_rows = 0;              // leading rows consumed by lags
};

// Assembles the regression sample per the config's column roles.
LoadedData load_csv(const std::string& path, const RunConfig& cfg);

// Writes y plus the non-intercept design columns with %.17g precision so a
// reload through load_csv reproduces the matrices bit for bit.  names, when
// given, labels the non-intercept columns (threshold last).
void write_dataset_csv(const std::string& path, const Dataset& ds,
                       const std::string& y_name = "y",
                       const std::vector<std::string>& names = {});

}  // namespace threshreg::cli
