#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "splashcert/errors.hpp"
#include "splashcert/format.hpp"

namespace splashcert {

enum class SystemKind { muskat_multiphase, sqg_contour, sqg_multiphase };

inline std::string to_string(SystemKind s) {
  switch (s) {
    case SystemKind::muskat_multiphase: return "muskat_multiphase";
    case SystemKind::sqg_contour: return "sqg_contour";
    case SystemKind::sqg_multiphase: return "sqg_multiphase";
  }
  return "?";
}

/// Run configuration, read from a flat `key = value` text file (one pair
/// per line, `#` comments). Zero values of quad_n, quad_l and window mean
/// "derive the default from the grid" (4N, A and A/2 respectively).
struct SimConfig {
  SystemKind system = SystemKind::muskat_multiphase;
  std::string scenario;
  std::map<std::string, double> scenario_params;  // keys without the "scenario." prefix

  std::size_t grid_n = 512;
  double half_width = 8.0;  // A, truncated real-line systems only
  double decay_tol = 1e-6;

  double zeta1 = -1.0;
  double zeta2 = 0.0;
  double zeta3 = 1.0;

  double dt = 1e-3;
  double t_end = 0.5;
  std::size_t record_every = 10;

  std::size_t quad_n = 0;  // 0 -> 4 * grid_n
  double quad_l = 0.0;     // 0 -> half_width

  double monitor_c0 = 16.0;
  double small_sep_frac = 0.1;
  double tol_env = 1e-3;
  double tol_rate_frac = 1e-3;

  double cfl = 0.5;
  double window = 0.0;  // min-separation search half-width; 0 -> half_width / 2
  int filter = -1;      // -1 auto (on for sqg_contour), 0 off, 1 on

  std::string out_dir = "out";

  std::size_t quad_n_effective() const { return quad_n != 0 ? quad_n : 4 * grid_n; }
  double quad_l_effective() const { return quad_l != 0.0 ? quad_l : half_width; }
  double window_effective() const { return window != 0.0 ? window : 0.5 * half_width; }
  bool filter_effective() const {
    return filter == 1 || (filter == -1 && system == SystemKind::sqg_contour);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& value, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": value of '" + key +
                      "' is not a number: '" + value + "'");
  }
  if (pos != value.size())
    throw ConfigError("config line " + std::to_string(line) + ": trailing characters in value of '" +
                      key + "'");
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& value, int line) {
  const double v = parse_number(key, value, line);
  if (!(v >= 0.0) || v != std::floor(v))
    throw ConfigError("config line " + std::to_string(line) + ": '" + key +
                      "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Parses the documented key-value format. Unknown keys are rejected with
/// their line number; constraints are checked after defaults are applied and
/// report the offending field by name.
inline SimConfig parse_config(const std::string& text) {
  SimConfig c;
  std::map<std::string, int> seen;
  bool have_system = false, have_scenario = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line) + ": empty key or value");
    if (seen.count(key))
      throw ConfigError("config line " + std::to_string(line) + ": duplicate key '" + key +
                        "' (first at line " + std::to_string(seen[key]) + ")");
    seen[key] = line;

    if (key == "system") {
      have_system = true;
      if (value == "muskat_multiphase")
        c.system = SystemKind::muskat_multiphase;
      else if (value == "sqg_contour")
        c.system = SystemKind::sqg_contour;
      else if (value == "sqg_multiphase")
        c.system = SystemKind::sqg_multiphase;
      else
        throw ConfigError("config line " + std::to_string(line) + ": unknown system '" + value +
                          "'");
    } else if (key == "scenario") {
      have_scenario = true;
      c.scenario = value;
    } else if (key.rfind("scenario.", 0) == 0) {
      const std::string p = key.substr(9);
      if (p.empty())
        throw ConfigError("config line " + std::to_string(line) + ": empty scenario parameter name");
      c.scenario_params[p] = detail::parse_number(key, value, line);
    } else if (key == "N") {
      c.grid_n = detail::parse_count(key, value, line);
    } else if (key == "A") {
      c.half_width = detail::parse_number(key, value, line);
    } else if (key == "decay_tol") {
      c.decay_tol = detail::parse_number(key, value, line);
    } else if (key == "zeta1") {
      c.zeta1 = detail::parse_number(key, value, line);
    } else if (key == "zeta2") {
      c.zeta2 = detail::parse_number(key, value, line);
    } else if (key == "zeta3") {
      c.zeta3 = detail::parse_number(key, value, line);
    } else if (key == "dt") {
      c.dt = detail::parse_number(key, value, line);
    } else if (key == "t_end") {
      c.t_end = detail::parse_number(key, value, line);
    } else if (key == "record_every") {
      c.record_every = detail::parse_count(key, value, line);
    } else if (key == "quad_N") {
      c.quad_n = detail::parse_count(key, value, line);
    } else if (key == "quad_L") {
      c.quad_l = detail::parse_number(key, value, line);
    } else if (key == "monitor_c0") {
      c.monitor_c0 = detail::parse_number(key, value, line);
    } else if (key == "small_sep_frac") {
      c.small_sep_frac = detail::parse_number(key, value, line);
    } else if (key == "tol_env") {
      c.tol_env = detail::parse_number(key, value, line);
    } else if (key == "tol_rate_frac") {
      c.tol_rate_frac = detail::parse_number(key, value, line);
    } else if (key == "cfl") {
      c.cfl = detail::parse_number(key, value, line);
    } else if (key == "window") {
      c.window = detail::parse_number(key, value, line);
    } else if (key == "filter") {
      if (value == "auto")
        c.filter = -1;
      else if (value == "on")
        c.filter = 1;
      else if (value == "off")
        c.filter = 0;
      else
        throw ConfigError("config line " + std::to_string(line) +
                          ": filter must be on, off or auto");
    } else if (key == "out_dir") {
      c.out_dir = value;
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }

  if (!have_system) throw ConfigError("config: missing required key 'system'");
  if (!have_scenario) throw ConfigError("config: missing required key 'scenario'");

  auto require = [](bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("config: field '" + field + "' " + why);
  };
  require(c.grid_n >= 16, "N", "must be at least 16");
  require(c.half_width > 0.0, "A", "must be positive");
  require(c.system == SystemKind::muskat_multiphase ? c.half_width > 1.0 : true, "A",
          "must exceed 1 for truncated Muskat runs (the middle split region ends at 1)");
  require(c.decay_tol > 0.0, "decay_tol", "must be positive");
  require(c.dt > 0.0, "dt", "must be positive");
  require(c.t_end >= 0.0, "t_end", "must be nonnegative");
  require(c.record_every >= 1, "record_every", "must be at least 1");
  require(c.quad_n % 2 == 0, "quad_N", "must be even");
  require(c.quad_l >= 0.0, "quad_L", "must be nonnegative");
  require(c.monitor_c0 > 0.0, "monitor_c0", "must be positive");
  require(c.small_sep_frac > 0.0, "small_sep_frac", "must be positive");
  require(c.tol_env >= 0.0, "tol_env", "must be nonnegative");
  require(c.tol_rate_frac >= 0.0, "tol_rate_frac", "must be nonnegative");
  require(c.cfl > 0.0, "cfl", "must be positive");
  require(c.window >= 0.0, "window", "must be nonnegative");
  return c;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical serialization: every field written explicitly in a fixed
/// order, so serialize(load(text)) is a normal form.
inline std::string serialize_config(const SimConfig& c) {
  std::ostringstream out;
  out << "system = " << to_string(c.system) << "\n";
  out << "scenario = " << c.scenario << "\n";
  for (const auto& [k, v] : c.scenario_params) out << "scenario." << k << " = " << csv_double(v) << "\n";
  out << "N = " << c.grid_n << "\n";
  out << "A = " << csv_double(c.half_width) << "\n";
  out << "decay_tol = " << csv_double(c.decay_tol) << "\n";
  out << "zeta1 = " << csv_double(c.zeta1) << "\n";
  out << "zeta2 = " << csv_double(c.zeta2) << "\n";
  out << "zeta3 = " << csv_double(c.zeta3) << "\n";
  out << "dt = " << csv_double(c.dt) << "\n";
  out << "t_end = " << csv_double(c.t_end) << "\n";
  out << "record_every = " << c.record_every << "\n";
  out << "quad_N = " << c.quad_n << "\n";
  out << "quad_L = " << csv_double(c.quad_l) << "\n";
  out << "monitor_c0 = " << csv_double(c.monitor_c0) << "\n";
  out << "small_sep_frac = " << csv_double(c.small_sep_frac) << "\n";
  out << "tol_env = " << csv_double(c.tol_env) << "\n";
  out << "tol_rate_frac = " << csv_double(c.tol_rate_frac) << "\n";
  out << "cfl = " << csv_double(c.cfl) << "\n";
  out << "window = " << csv_double(c.window) << "\n";
  out << "filter = " << (c.filter == -1 ? "auto" : (c.filter == 1 ? "on" : "off")) << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

}  // namespace splashcert
