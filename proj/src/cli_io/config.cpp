#include "lasekk/cli_io/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "lasekk/cli_io/csv.hpp"

namespace lasekk::cli {
namespace {

// Serialization order; also the set of accepted keys.
const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "preset", "input",
      "gamma", "q", "gq", "nu0",
      "gamma_ba", "r_op", "delta_pump", "omega1", "gain_g",
      "grid_min", "grid_max", "grid_n", "kk_window",
      "tail_chi_prime", "tail_chi_double_prime",
      "deltas", "td_deltas", "random", "seed",
      "oracles", "svg"};
  return keys;
}

const std::set<std::string> kLaserOnly = {"q", "gq", "nu0"};
const std::set<std::string> kProbeOnly = {"gamma_ba", "r_op", "delta_pump", "omega1", "gain_g"};

bool is_known(const std::string& key) {
  const auto& k = known_keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long parse_long(const std::string& text, const std::string& key) {
  long v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  std::uint64_t v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError(key + ": expected true or false, got '" + text + "'");
}

class Reader {
 public:
  explicit Reader(const Settings& s) : s_(s) {}

  const std::string* raw(const std::string& key) {
    const auto it = s_.find(key);
    if (it == s_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }
  double number(const std::string& key, double fallback) {
    const auto* v = raw(key);
    return v ? parse_double(*v, key) : fallback;
  }
  long integer(const std::string& key, long fallback) {
    const auto* v = raw(key);
    return v ? parse_long(*v, key) : fallback;
  }
  bool flag(const std::string& key, bool fallback) {
    const auto* v = raw(key);
    return v ? parse_bool(*v, key) : fallback;
  }
  bool has(const std::string& key) const { return s_.count(key) != 0; }

  void reject_unused(const char* context) const {
    for (const auto& [key, value] : s_)
      if (!used_.count(key))
        throw ValidationError("setting '" + key + "' does not apply to " + context);
  }

 private:
  const Settings& s_;
  std::set<std::string> used_;
};

const char* default_preset(Command c) {
  return c == Command::LaserProfile ? "fig1" : "fig4a";
}

UniformGrid<double> read_grid(Reader& r, double half_span, long count) {
  UniformGrid<double> g{-half_span, half_span, count};
  g.lo = r.number("grid_min", g.lo);
  g.hi = r.number("grid_max", g.hi);
  g.count = r.integer("grid_n", g.count);
  g.validate();
  return g;
}

}  // namespace

Settings parse_settings(const std::string& text, const std::string& origin) {
  Settings out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known(key)) throw ValidationError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ValidationError(where + ": empty value for '" + key + "'");
    if (!out.emplace(key, value).second) throw ValidationError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

Settings load_settings_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_settings(ss.str(), path);
}

const char* command_name(Command c) {
  switch (c) {
    case Command::LaserProfile: return "laser-profile";
    case Command::ProbeSpectrum: return "probe-spectrum";
    case Command::KKCheck: return "kk-check";
    case Command::OracleCompare: return "oracle-compare";
  }
  return "?";
}

EffectiveConfig resolve(Command command, const Settings& s) {
  for (const auto& [key, value] : s)
    if (!is_known(key)) throw ValidationError("unknown setting '" + key + "'");

  Reader r(s);
  EffectiveConfig cfg;
  cfg.command = command;
  cfg.seed = 1;
  if (const auto* seed = r.raw("seed")) cfg.seed = parse_u64(*seed, "seed");
  const std::string context = std::string("the ") + command_name(command) + " command";

  if (command == Command::KKCheck && r.has("input")) {
    cfg.input = *r.raw("input");
    cfg.family = Family::Probe;
    cfg.tails.chi_prime = int(r.integer("tail_chi_prime", 1));
    cfg.tails.chi_double_prime = int(r.integer("tail_chi_double_prime", 2));
    for (int p : {cfg.tails.chi_prime, cfg.tails.chi_double_prime})
      if (p < 0 || p > 2) throw ValidationError("tail exponents must be 0, 1 or 2");
    cfg.svg = r.flag("svg", false);
    r.reject_unused("kk-check with an input file");
    return cfg;
  }

  const std::string* preset_name = r.raw("preset");
  const Preset& preset = find_preset(preset_name ? *preset_name : default_preset(command));
  cfg.preset = preset.name;
  cfg.family = preset.family;

  if (command == Command::LaserProfile && cfg.family != Family::Laser)
    throw ValidationError("laser-profile needs a laser preset (fig1), got " + cfg.preset);
  if ((command == Command::ProbeSpectrum || command == Command::OracleCompare) &&
      cfg.family != Family::Probe)
    throw ValidationError(std::string(command_name(command)) +
                          " needs a pump-probe preset (fig4a-d), got " + cfg.preset);

  const auto& wrong_family = cfg.family == Family::Laser ? kProbeOnly : kLaserOnly;
  for (const auto& [key, value] : s)
    if (wrong_family.count(key))
      throw ValidationError("setting '" + key + "' does not apply to preset " + cfg.preset);

  if (cfg.family == Family::Laser) {
    const double gamma = r.number("gamma", preset.medium.gamma_medium);
    const double q = r.number("q", preset.cavity.q_factor);
    cfg.gq = r.number("gq", preset.gq);
    const double nu0 = r.number("nu0", preset.medium.nu0);
    detail::require_positive(cfg.gq, "gq");
    cfg.cavity = {q, nu0};
    cfg.cavity.validate();
    cfg.medium = {gamma, nu0, cfg.gq / q};
    cfg.medium.validate();
  } else {
    const auto& p = preset.probe;
    cfg.probe = {r.number("gamma", p.gamma_parallel), r.number("gamma_ba", p.gamma_ba),
                 r.number("r_op", p.r_op),            r.number("delta_pump", p.delta_pump),
                 r.number("omega1", p.omega1),        r.number("gain_g", p.gain_g)};
    cfg.probe.validate();
  }
  const double probe_scale =
      cfg.family == Family::Probe ? std::max(effective_rabi(cfg.probe), cfg.probe.eta()) : 0.0;

  switch (command) {
    case Command::LaserProfile:
      cfg.grid = read_grid(r, 3.0 * cfg.medium.gamma_medium, 4001);
      if (cfg.grid.count < 9) throw ValidationError("laser-profile needs grid_n >= 9");
      break;
    case Command::ProbeSpectrum:
      cfg.grid = read_grid(r, 5.0 * probe_scale, 4096);
      cfg.oracles = r.flag("oracles", false);
      break;
    case Command::KKCheck: {
      const bool laser = cfg.family == Family::Laser;
      const double window = r.number("kk_window", laser ? 10.0 : 100.0);
      detail::require_positive(window, "kk_window");
      cfg.grid = read_grid(r, window * (laser ? cfg.medium.gamma_medium : cfg.probe.eta()), 16384);
      cfg.tails.chi_prime = int(r.integer("tail_chi_prime", 1));
      cfg.tails.chi_double_prime = int(r.integer("tail_chi_double_prime", 2));
      for (int p : {cfg.tails.chi_prime, cfg.tails.chi_double_prime})
        if (p < 0 || p > 2) throw ValidationError("tail exponents must be 0, 1 or 2");
      break;
    }
    case Command::OracleCompare: {
      const long deltas = r.integer("deltas", 32);
      if (deltas < 1 || deltas > 100000) throw ValidationError("deltas must be in [1, 100000]");
      cfg.deltas = int(deltas);
      cfg.random = int(r.integer("random", 0));
      if (cfg.random < 0) throw ValidationError("random must be >= 0");
      const long td = r.integer("td_deltas", cfg.random > 0 ? 1 : 5);
      if (td < 0 || td > deltas) throw ValidationError("td_deltas must be in [0, deltas]");
      cfg.td_deltas = int(td);
      if (cfg.random == 0) {
        cfg.grid = read_grid(r, 5.0 * probe_scale, deltas);
        if (cfg.grid.count != deltas) throw ValidationError("grid_n and deltas disagree");
      } else {
        cfg.grid = {0.0, 0.0, deltas};  // per-draw window
      }
      break;
    }
  }
  if (command != Command::OracleCompare) cfg.svg = r.flag("svg", false);
  r.reject_unused(context.c_str());
  return cfg;
}

std::string serialize(const EffectiveConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  const auto num = [&](const char* k, double v) { kv.emplace_back(k, format_double(v)); };
  const auto integer = [&](const char* k, long long v) { kv.emplace_back(k, std::to_string(v)); };
  const auto flag = [&](const char* k, bool v) { kv.emplace_back(k, v ? "true" : "false"); };

  if (!cfg.input.empty()) {
    kv.emplace_back("input", cfg.input);
  } else {
    kv.emplace_back("preset", cfg.preset);
    if (cfg.family == Family::Laser) {
      num("gamma", cfg.medium.gamma_medium);
      num("q", cfg.cavity.q_factor);
      num("gq", cfg.gq);
      num("nu0", cfg.cavity.nu0);
    } else {
      num("gamma", cfg.probe.gamma_parallel);
      num("gamma_ba", cfg.probe.gamma_ba);
      num("r_op", cfg.probe.r_op);
      num("delta_pump", cfg.probe.delta_pump);
      num("omega1", cfg.probe.omega1);
      num("gain_g", cfg.probe.gain_g);
    }
    if (!(cfg.command == Command::OracleCompare && cfg.random > 0)) {
      num("grid_min", cfg.grid.lo);
      num("grid_max", cfg.grid.hi);
      if (cfg.command != Command::OracleCompare) integer("grid_n", cfg.grid.count);
    }
  }
  if (cfg.command == Command::KKCheck) {
    integer("tail_chi_prime", cfg.tails.chi_prime);
    integer("tail_chi_double_prime", cfg.tails.chi_double_prime);
  }
  if (cfg.command == Command::OracleCompare) {
    integer("deltas", cfg.deltas);
    integer("td_deltas", cfg.td_deltas);
    integer("random", cfg.random);
  }
  kv.emplace_back("seed", std::to_string(cfg.seed));
  if (cfg.command == Command::ProbeSpectrum) flag("oracles", cfg.oracles);
  if (cfg.command != Command::OracleCompare) flag("svg", cfg.svg);

  std::string out = std::string("# effective ") + command_name(cfg.command) + " configuration\n";
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string describe_parameters(const EffectiveConfig& cfg) {
  if (!cfg.input.empty()) return "input=" + cfg.input;
  std::string s = "preset=" + cfg.preset;
  if (cfg.family == Family::Laser) {
    s += " gamma=" + format_double(cfg.medium.gamma_medium) + " q=" + format_double(cfg.cavity.q_factor) +
         " gq=" + format_double(cfg.gq);
  } else {
    const auto& p = cfg.probe;
    s += " gamma=" + format_double(p.gamma_parallel) + " gamma_ba=" + format_double(p.gamma_ba) +
         " r_op=" + format_double(p.r_op) + " delta_pump=" + format_double(p.delta_pump) +
         " omega1=" + format_double(p.omega1) + " gain_g=" + format_double(p.gain_g);
  }
  return s;
}

}  // namespace lasekk::cli
