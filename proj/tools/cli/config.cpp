#include "cli/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <threshreg/errors.hpp>

namespace threshreg::cli {

ColumnSpec parse_column_spec(const std::string& text) {
  ColumnSpec spec;
  const auto pos = text.rfind(':');
  if (pos == std::string::npos) {
    spec.name = text;
    return spec;
  }
  const std::string suffix = text.substr(pos + 1);
  if (suffix.rfind("lag", 0) != 0)
    throw ParseError("column spec '" + text + "': expected ':lagK' suffix");
  const std::string digits = suffix.substr(3);
  int k = 0;
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || p != digits.data() + digits.size() || k < 0)
    throw ParseError("column spec '" + text + "': bad lag count '" + digits + "'");
  spec.name = text.substr(0, pos);
  spec.lag = k;
  if (spec.name.empty())
    throw ParseError("column spec '" + text + "': empty column name");
  return spec;
}

namespace {

// %.17g so the canonical form survives a write/read round trip exactly.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "input=" << cfg.input_path
     << ";response=" << cfg.response
     << ";regressors=";
  for (std::size_t i = 0; i < cfg.regressors.size(); ++i)
    os << (i ? "," : "") << cfg.regressors[i];
  os << ";threshold=" << cfg.threshold_var
     << ";lag=" << cfg.lag
     << ";trim=" << num(cfg.trim)
     << ";grid_points=" << cfg.grid_points
     << ";kernel=" << cfg.kernel
     << ";bandwidth=" << num(cfg.bandwidth)
     << ";boot_reps=" << cfg.boot_reps
     << ";multiplier=" << cfg.multiplier
     << ";seed=" << cfg.seed
     << ";levels=";
  for (std::size_t i = 0; i < cfg.levels.size(); ++i)
    os << (i ? "," : "") << num(cfg.levels[i]);
  os << ";design=" << cfg.design
     << ";experiment=" << cfg.experiment
     << ";n=" << cfg.n
     << ";replications=" << cfg.replications
     << ";gamma0=" << num(cfg.gamma0)
     << ";q_mean=" << num(cfg.q_mean)
     << ";delta_multipliers=";
  for (std::size_t i = 0; i < cfg.delta_multipliers.size(); ++i)
    os << (i ? "," : "") << num(cfg.delta_multipliers[i]);
  os << ";quantile_points=" << cfg.quantile_points;
  // threads and output location deliberately excluded: they must not
  // change any number.
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = canonical_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace threshreg::cli
