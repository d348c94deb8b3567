#include "heraldsim/config_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace heraldsim {

ExperimentConfig desk_profile() {
  // Defaults in config.hpp are the desk profile.
  return ExperimentConfig{};
}

ExperimentConfig paper_profile() {
  ExperimentConfig cfg;
  // Pre-loss pair rate back-solved so the detected idler rate at
  // transmission 1 is ~14k counts/s (0.41 * 0.38 * 9e4 ~ 1.4e4). Not a
  // directly measured quantity.
  cfg.source.pair_rate = 9.0e4;
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("value for '" + key + "' is not a number: '" + value + "'");
  return x;
}

std::uint64_t parse_uint(const std::string& value, const std::string& key) {
  if (!value.empty() && value[0] == '-')
    throw ConfigError("value for '" + key + "' must be a nonnegative integer");
  char* end = nullptr;
  const unsigned long long x = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("value for '" + key + "' is not an integer: '" + value + "'");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("value for '" + key + "' must be true or false");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> table = {
      {"source.pair_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.source.pair_rate = parse_double(v, k);
       }},
      {"source.duration",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.source.duration = parse_double(v, k);
       }},
      {"source.signal_channel_efficiency",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.source.signal_channel_efficiency = parse_double(v, k);
       }},
      {"source.wavelength_signal_nm",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.source.wavelength_signal_nm = parse_double(v, k);
       }},
      {"source.wavelength_idler_nm",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.source.wavelength_idler_nm = parse_double(v, k);
       }},
      {"sample.transmission",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sample.transmission = parse_double(v, k);
       }},
      {"idler_channel.setup_efficiency",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.idler_channel.setup_efficiency = parse_double(v, k);
       }},
      {"idler_channel.delay_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.idler_channel.delay_s = parse_double(v, k);
       }},
      {"switch.enabled",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.optical_switch.enabled = parse_bool(v, k);
       }},
      {"switch.electronic_latency_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.optical_switch.electronic_latency_s = parse_double(v, k);
       }},
      {"switch.gate_width_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.optical_switch.gate_width_s = parse_double(v, k);
       }},
      {"switch.off_state_leakage",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.optical_switch.off_state_leakage = parse_double(v, k);
       }},
      {"switch.on_state_transmission",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.optical_switch.on_state_transmission = parse_double(v, k);
       }},
      {"herald_detector.efficiency",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.herald_detector.efficiency = parse_double(v, k);
       }},
      {"herald_detector.dark_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.herald_detector.dark_rate = parse_double(v, k);
       }},
      {"herald_detector.dead_time_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.herald_detector.dead_time_s = parse_double(v, k);
       }},
      {"idler_detector.efficiency",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.idler_detector.efficiency = parse_double(v, k);
       }},
      {"idler_detector.dark_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.idler_detector.dark_rate = parse_double(v, k);
       }},
      {"idler_detector.dead_time_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.idler_detector.dead_time_s = parse_double(v, k);
       }},
      {"coincidence.window_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.coincidence.window_s = parse_double(v, k);
       }},
      {"coincidence.nominal_offset_s",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.coincidence.nominal_offset_s = parse_double(v, k);
       }},
      {"repetitions",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.repetitions = parse_uint(v, k);
       }},
      {"master_seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.master_seed = parse_uint(v, k);
       }},
      {"hbt_mode",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.hbt_mode = parse_bool(v, k);
       }},
      {"jitter_std",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.jitter_std = parse_double(v, k);
       }},
      {"dark_correction",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.dark_correction = parse_bool(v, k);
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed.reset();

  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

    const auto it = schema().find(key);
    if (it == schema().end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    it->second(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto real = [&](const char* key, double v) { out << key << " = " << fmt_double(v) << "\n"; };
  auto boolean = [&](const char* key, bool v) { out << key << " = " << (v ? "true" : "false") << "\n"; };

  real("source.pair_rate", c.source.pair_rate);
  real("source.duration", c.source.duration);
  real("source.signal_channel_efficiency", c.source.signal_channel_efficiency);
  real("source.wavelength_signal_nm", c.source.wavelength_signal_nm);
  real("source.wavelength_idler_nm", c.source.wavelength_idler_nm);
  real("sample.transmission", c.sample.transmission);
  real("idler_channel.setup_efficiency", c.idler_channel.setup_efficiency);
  real("idler_channel.delay_s", c.idler_channel.delay_s);
  boolean("switch.enabled", c.optical_switch.enabled);
  real("switch.electronic_latency_s", c.optical_switch.electronic_latency_s);
  real("switch.gate_width_s", c.optical_switch.gate_width_s);
  real("switch.off_state_leakage", c.optical_switch.off_state_leakage);
  real("switch.on_state_transmission", c.optical_switch.on_state_transmission);
  real("herald_detector.efficiency", c.herald_detector.efficiency);
  real("herald_detector.dark_rate", c.herald_detector.dark_rate);
  real("herald_detector.dead_time_s", c.herald_detector.dead_time_s);
  real("idler_detector.efficiency", c.idler_detector.efficiency);
  real("idler_detector.dark_rate", c.idler_detector.dark_rate);
  real("idler_detector.dead_time_s", c.idler_detector.dead_time_s);
  real("coincidence.window_s", c.coincidence.window_s);
  real("coincidence.nominal_offset_s", c.coincidence.nominal_offset_s);
  out << "repetitions = " << c.repetitions << "\n";
  if (c.master_seed) out << "master_seed = " << *c.master_seed << "\n";
  boolean("hbt_mode", c.hbt_mode);
  real("jitter_std", c.jitter_std);
  boolean("dark_correction", c.dark_correction);
  return out.str();
}

}  // namespace heraldsim
