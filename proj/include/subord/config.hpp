#pragma once

#include <map>
#include <string>

#include "subord/montecarlo.hpp"
#include "subord/subordinator.hpp"

namespace subord {

// A parsed config document: flat map of dotted keys to string values.
// Accepted syntaxes: flat `key = value` lines ('#' comments, blank lines
// ignored) or a JSON object (nested objects flatten into dotted keys).
struct ParsedConfig {
  std::map<std::string, std::string> kv;
  std::map<std::string, int> lines;  // key -> 1-based source line (flat format)

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  // Typed getters throw ConfigError naming the key (and line when known).
  std::string get_string(const std::string& key, const std::string& fallback = "") const;
  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  long long get_integer(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Build the spec from `kill`, `drift`, `levy.*`, `label`. Throws ConfigError.
SubordinatorSpec build_spec(const ParsedConfig& cfg);

// Build simulation settings from `sim.*` keys (seed, n, epsilon, compensate,
// workers); missing keys keep defaults. SUBORDKIT_THREADS is applied by the
// montecarlo module at run time, not here.
SimConfig build_sim_config(const ParsedConfig& cfg);

// Serialize a spec back to the flat config format; parse_config_text of the
// result rebuilds an equivalent spec (round trip).
std::string spec_to_config(const SubordinatorSpec& spec);

// %.17g rendering used for all CSV numeric output.
std::string num17(double v);

}  // namespace subord
