#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fogdrip {

/// Everything a command-line run depends on. Written back into every run
/// directory so that the run can be repeated from the file alone.
struct RunConfig {
  // [geometry]
  int N = 24;
  int R = 2;
  int hmax = 4;
  // [model]
  double beta = 2.0;
  double pv = 0.2;
  double ps = 0.8;
  double f = 0.0;
  double delta = 0.0;
  // [run]
  std::int64_t sweeps = 10000;
  std::int64_t burnin = -1;
  std::int64_t thinning = 0;
  std::uint64_t seed = 1;
  int replicates = 8;
  double epsilon = 1.0;
  double eta = 0.25;
  std::string weights = "auto";
  // [tension]
  std::string tension = "isotropic";
  std::optional<double> tension_beta;  ///< the model beta when absent
  int directions = 720;
  int path_length = 64;
  // [simulate]
  std::string ensemble = "grand";
  std::int64_t pin_lo = 0;
  std::int64_t pin_hi = 0;
  bool wang_landau = false;
  std::int64_t b_min = 0;
  std::int64_t b_max = 0;
  int windows = 1;
  double log_f_final = 1e-8;
  std::int64_t max_sweeps_per_window = 10'000'000;
  // [phase]
  bool allow_unfit = false;
  int points = 200;
  // [wulff]
  double s_step = 1e-3;
  // [sweep]
  std::vector<double> deltas;
  std::int64_t budget_sweeps = 0;
  double bound_slack = 1.0;
  // [oracle]
  int L = 2;
  std::string golden;

  double effective_tension_beta() const { return tension_beta.value_or(beta); }
};

/// One configurable value: its place in the file, its command-line flag and
/// text conversions in both directions.
struct ConfigKey {
  std::string section;
  std::string key;
  std::string flag;  ///< without the leading dashes
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;  ///< throws ConfigError on bad text
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();
const ConfigKey& config_key_by_flag(const std::string& flag);

/// Reads an INI file. Unknown sections or keys and malformed values throw ConfigError.
RunConfig read_config(const std::string& path);
RunConfig parse_config(std::istream& in);
void write_config(const RunConfig& config, std::ostream& out);

/// Range and consistency checks that do not need the library; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace fogdrip
