#include "fogdrip/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(what + ": cannot read '" + text + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(what + ": value must be finite");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::string format_int(T v) {
  return std::to_string(v);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number<double>(item, what));
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

#define FOGDRIP_NUMBER(SECTION, KEY, FLAG, MEMBER, TYPE, HELP)                                     \
  ConfigKey {                                                                                      \
    SECTION, KEY, FLAG, HELP,                                                                      \
        [](RunConfig& c, const std::string& s) {                                                   \
          c.MEMBER = parse_number<TYPE>(s, std::string("[") + SECTION + "] " + KEY);               \
        },                                                                                         \
        [](const RunConfig& c) {                                                                   \
          if constexpr (std::is_floating_point_v<TYPE>) return format_double(c.MEMBER);            \
          else return format_int(c.MEMBER);                                                        \
        }                                                                                          \
  }

#define FOGDRIP_TEXT(SECTION, KEY, FLAG, MEMBER, HELP)                                             \
  ConfigKey {                                                                                      \
    SECTION, KEY, FLAG, HELP, [](RunConfig& c, const std::string& s) { c.MEMBER = trim(s); },      \
        [](const RunConfig& c) { return c.MEMBER; }                                                \
  }

#define FOGDRIP_BOOL(SECTION, KEY, FLAG, MEMBER, HELP)                                             \
  ConfigKey {                                                                                      \
    SECTION, KEY, FLAG, HELP,                                                                      \
        [](RunConfig& c, const std::string& s) {                                                   \
          c.MEMBER = parse_bool(s, std::string("[") + SECTION + "] " + KEY);                       \
        },                                                                                         \
        [](const RunConfig& c) { return std::string(c.MEMBER ? "true" : "false"); }                \
  }

std::vector<ConfigKey> make_keys() {
  std::vector<ConfigKey> k = {
      FOGDRIP_NUMBER("geometry", "N", "N", N, int, "box scale N"),
      FOGDRIP_NUMBER("geometry", "R", "R", R, int, "box side in units of N"),
      FOGDRIP_NUMBER("geometry", "hmax", "hmax", hmax, int, "height cap"),
      FOGDRIP_NUMBER("model", "beta", "beta", beta, double, "inverse temperature"),
      FOGDRIP_NUMBER("model", "pv", "pv", pv, double, "vapour occupation probability"),
      FOGDRIP_NUMBER("model", "ps", "ps", ps, double, "solid occupation probability"),
      FOGDRIP_NUMBER("model", "f", "f", f, double, "common shift of the chemical potentials"),
      FOGDRIP_NUMBER("model", "delta", "delta", delta, double, "supersaturation"),
      FOGDRIP_NUMBER("run", "sweeps", "sweeps", sweeps, std::int64_t, "sweeps per chain"),
      FOGDRIP_NUMBER("run", "burnin", "burnin", burnin, std::int64_t, "burn-in sweeps; negative means 10%"),
      FOGDRIP_NUMBER("run", "thinning", "thinning", thinning, std::int64_t, "snapshot period; 0 disables"),
      FOGDRIP_NUMBER("run", "seed", "seed", seed, std::uint64_t, "master seed"),
      FOGDRIP_NUMBER("run", "replicates", "replicates", replicates, int, "chains per grid point"),
      FOGDRIP_NUMBER("run", "epsilon", "epsilon", epsilon, double, "contour size threshold scale"),
      FOGDRIP_NUMBER("run", "eta", "eta", eta, double, "volume regime exponent"),
      FOGDRIP_TEXT("run", "weights", "weights", weights, "canonical weights: auto, exact or llt"),
      FOGDRIP_TEXT("tension", "model", "tension", tension, "lattice-L1, isotropic or numeric-path"),
      ConfigKey{"tension", "beta", "tension-beta", "tension beta (default: model beta)",
                [](RunConfig& c, const std::string& s) {
                  c.tension_beta = parse_number<double>(s, "[tension] beta");
                },
                [](const RunConfig& c) {
                  return c.tension_beta ? format_double(*c.tension_beta) : std::string();
                }},
      FOGDRIP_NUMBER("tension", "directions", "directions", directions, int, "initial Wulff directions"),
      FOGDRIP_NUMBER("tension", "path_length", "path-length", path_length, int, "directed path length"),
      FOGDRIP_TEXT("simulate", "ensemble", "ensemble", ensemble, "grand, canonical or pinned"),
      FOGDRIP_NUMBER("simulate", "lo", "lo", pin_lo, std::int64_t, "pinned ensemble lower alpha"),
      FOGDRIP_NUMBER("simulate", "hi", "hi", pin_hi, std::int64_t, "pinned ensemble upper alpha"),
      FOGDRIP_BOOL("simulate", "wang_landau", "wang-landau", wang_landau, "also estimate the alpha density"),
      FOGDRIP_NUMBER("simulate", "b_min", "b-min", b_min, std::int64_t, "density range start"),
      FOGDRIP_NUMBER("simulate", "b_max", "b-max", b_max, std::int64_t, "density range end"),
      FOGDRIP_NUMBER("simulate", "windows", "windows", windows, int, "Wang-Landau windows"),
      FOGDRIP_NUMBER("simulate", "log_f_final", "log-f-final", log_f_final, double, "final modification factor"),
      FOGDRIP_NUMBER("simulate", "max_sweeps_per_window", "max-window-sweeps", max_sweeps_per_window,
                     std::int64_t, "sweep cap per window"),
      FOGDRIP_BOOL("phase", "allow_unfit", "allow-unfit", allow_unfit, "solve even if the droplet does not fit"),
      FOGDRIP_NUMBER("phase", "points", "points", points, int, "table rows"),
      FOGDRIP_NUMBER("wulff", "s_step", "s-step", s_step, double, "grid step of the restricted problem"),
      ConfigKey{"sweep", "deltas", "deltas", "comma-separated supersaturations",
                [](RunConfig& c, const std::string& s) { c.deltas = parse_list(s, "[sweep] deltas"); },
                [](const RunConfig& c) { return format_list(c.deltas); }},
      FOGDRIP_NUMBER("sweep", "budget_sweeps", "budget-sweeps", budget_sweeps, std::int64_t,
                     "cap on total sweeps; 0 for none"),
      FOGDRIP_NUMBER("sweep", "bound_slack", "bound-slack", bound_slack, double, "slack of the volume bound"),
      FOGDRIP_NUMBER("oracle", "L", "L", L, int, "interior side"),
      FOGDRIP_TEXT("oracle", "golden", "golden", golden, "reference file"),
  };
  return k;
}

#undef FOGDRIP_NUMBER
#undef FOGDRIP_TEXT
#undef FOGDRIP_BOOL

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = make_keys();
  return keys;
}

const ConfigKey& config_key_by_flag(const std::string& flag) {
  for (const auto& k : config_keys())
    if (k.flag == flag) return k;
  throw ConfigError("no configuration key for flag --" + flag);
}

RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  std::map<std::pair<std::string, std::string>, const ConfigKey*> index;
  for (const auto& k : config_keys()) index[{k.section, k.key}] = &k;

  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError("config file: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      const auto it = index.find({section, key});
      if (it == index.end()) throw ConfigError("config file: unknown key [" + section + "] " + key);
      const std::string text = value.get_value<std::string>();
      // An empty optional value keeps the default.
      if (trim(text).empty() && section == "tension" && key == "beta") continue;
      it->second->set(c, text);
    }
  }
  return c;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(const RunConfig& c, std::ostream& out) {
  std::string section;
  for (const auto& k : config_keys()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.key << " = " << k.get(c) << '\n';
  }
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.N >= 1 && c.R >= 1, "N and R must be positive");
  need(c.hmax >= 1, "hmax must be positive");
  need(c.beta > 0, "beta must be positive");
  need(c.pv > 0 && c.ps < 1 && c.pv < c.ps, "need 0 < pv < ps < 1");
  need(c.sweeps >= 0, "sweeps must be non-negative");
  need(c.thinning >= 0, "thinning must be non-negative");
  need(c.replicates >= 1, "replicates must be at least 1");
  need(c.epsilon > 0, "epsilon must be positive");
  need(c.eta > 0 && c.eta < 0.5, "eta must lie in (0, 1/2)");
  need(c.weights == "auto" || c.weights == "exact" || c.weights == "llt", "weights must be auto, exact or llt");
  need(c.directions >= 8, "directions must be at least 8");
  need(c.ensemble == "grand" || c.ensemble == "canonical" || c.ensemble == "pinned",
       "ensemble must be grand, canonical or pinned");
  need(c.pin_lo <= c.pin_hi, "pinned window needs lo <= hi");
  need(c.b_min <= c.b_max, "density range needs b_min <= b_max");
  need(c.windows >= 1, "windows must be at least 1");
  need(c.points >= 2, "points must be at least 2");
  need(c.s_step > 0 && c.s_step < 1, "s_step must lie in (0, 1)");
  need(c.budget_sweeps >= 0, "budget_sweeps must be non-negative");
  need(c.L >= 1, "L must be positive");
  if (c.tension_beta) need(*c.tension_beta > 0, "tension beta must be positive");
}

}  // namespace fogdrip
