#include "cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <threshreg/errors.hpp>

namespace threshreg::cli {

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': in_quotes = true; row_started = true; break;
      case ',': end_field(); row_started = true; break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n': end_row(); break;
      default: field += c; row_started = true; break;
    }
  }
  if (in_quotes) throw ParseError("'" + path + "': unbalanced quote");
  if (row_started || !field.empty() || !row.empty()) end_row();

  if (rows.empty()) throw ParseError("'" + path + "': no header row");
  CsvTable table;
  table.header = std::move(rows.front());
  const std::size_t width = table.header.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      std::ostringstream os;
      os << "'" << path << "': row " << r << " has " << rows[r].size()
         << " fields, expected " << width;
      throw ParseError(os.str());
    }
    table.rows.push_back(std::move(rows[r]));
  }
  return table;
}

namespace {

std::string_view trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string_view(s).substr(b, e - b);
}

int find_column(const CsvTable& table, const std::string& name) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end())
    throw DomainError("column '" + name + "' not found in header");
  return static_cast<int>(it - table.header.begin());
}

// Full numeric column; messages count data rows from 1.
Eigen::VectorXd numeric_column(const CsvTable& table, int col) {
  const auto n = static_cast<int>(table.rows.size());
  Eigen::VectorXd v(n);
  for (int r = 0; r < n; ++r) {
    const std::string_view cell = trimmed(table.rows[r][col]);
    const std::string& name = table.header[col];
    if (cell.empty() || cell == "NA" || cell == "na" || cell == "NaN" ||
        cell == "nan") {
      std::ostringstream os;
      os << "missing value at row " << (r + 1) << ", column " << name;
      throw MissingValue(os.str());
    }
    double x = 0.0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (ec != std::errc{} || p != cell.data() + cell.size()) {
      std::ostringstream os;
      os << "cannot parse '" << std::string(cell) << "' at row " << (r + 1)
         << ", column " << name;
      throw ParseError(os.str());
    }
    v(r) = x;
  }
  return v;
}

std::string spec_label(const ColumnSpec& s) {
  if (s.lag == 0) return s.name;
  return s.name + ":lag" + std::to_string(s.lag);
}

}  // namespace

LoadedData load_csv(const std::string& path, const RunConfig& cfg) {
  if (cfg.response.empty()) throw DomainError("no response column configured");
  if (cfg.threshold_var.empty()) throw DomainError("no threshold column configured");
  if (cfg.lag < 0) throw DomainError("lag must be nonnegative");
  const CsvTable table = read_csv(path);

  ColumnSpec thr = parse_column_spec(cfg.threshold_var);
  if (cfg.lag > 0 && thr.lag == 0) thr.lag = cfg.lag;

  std::vector<ColumnSpec> regs;
  for (const auto& text : cfg.regressors) regs.push_back(parse_column_spec(text));
  if (cfg.lag > 0) {
    const ColumnSpec lagged_response{cfg.response, cfg.lag};
    const bool present = std::any_of(regs.begin(), regs.end(), [&](const ColumnSpec& s) {
      return s.name == lagged_response.name && s.lag == lagged_response.lag;
    });
    if (!present) regs.push_back(lagged_response);
  }
  // The threshold variable lives in the last column only: drop any
  // duplicate mention from the regressor list.
  std::erase_if(regs, [&](const ColumnSpec& s) {
    return s.name == thr.name && s.lag == thr.lag;
  });

  int max_lag = thr.lag;
  for (const auto& s : regs) max_lag = std::max(max_lag, s.lag);

  const auto rows = static_cast<int>(table.rows.size());
  const int n = rows - max_lag;
  const int k = static_cast<int>(regs.size()) + 2;  // intercept + threshold
  if (n < 4 * k + 4) {
    std::ostringstream os;
    os << "'" << path << "': " << rows << " data rows leave n = " << n
       << " after lagging, need at least " << 4 * k + 4;
    throw TooFewRows(os.str());
  }

  const Eigen::VectorXd y_full = numeric_column(table, find_column(table, cfg.response));
  auto lagged = [&](const ColumnSpec& s) {
    const Eigen::VectorXd full = numeric_column(table, find_column(table, s.name));
    return full.segment(max_lag - s.lag, n).eval();
  };

  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  std::vector<std::string> x_names{"const"};
  for (std::size_t j = 0; j < regs.size(); ++j) {
    X.col(1 + static_cast<int>(j)) = lagged(regs[j]);
    x_names.push_back(spec_label(regs[j]));
  }
  X.col(k - 1) = lagged(thr);
  x_names.push_back(spec_label(thr));

  Eigen::VectorXd y = y_full.segment(max_lag, n);
  return LoadedData{Dataset(std::move(y), std::move(X)), cfg.response,
                    std::move(x_names), max_lag};
}

void write_dataset_csv(const std::string& path, const Dataset& ds,
                       const std::string& y_name,
                       const std::vector<std::string>& names) {
  const int n = ds.n(), k = ds.k();
  std::vector<std::string> cols;
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != k - 1)
      throw DimensionMismatch("write_dataset_csv: need k-1 column names");
    cols = names;
  } else {
    for (int j = 1; j + 1 < k; ++j) cols.push_back("x" + std::to_string(j));
    cols.push_back("q");
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << y_name;
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (int t = 0; t < n; ++t) {
    put(ds.y()(t));
    for (int j = 1; j < k; ++j) {
      out << ',';
      put(ds.X()(t, j));
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace threshreg::cli
