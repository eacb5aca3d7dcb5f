#include "subord/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "subord/errors.hpp"

#include "json.hpp"

namespace subord {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strips a trailing comment: '#' at line start or preceded by whitespace.
std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))))
      return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError("key '" + key + "' has an empty value", line);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size())
    throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'", line);
  return x;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value,
                                      int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item, line));
  if (out.empty()) throw ConfigError("key '" + key + "' has an empty list", line);
  return out;
}

int line_of(const ParsedConfig& cfg, const std::string& key) {
  auto it = cfg.lines.find(key);
  return it == cfg.lines.end() ? 0 : it->second;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, ParsedConfig& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      flatten_json(it.value(), key, out);
    }
    return;
  }
  std::string value;
  if (j.is_string()) {
    value = j.get<std::string>();
  } else if (j.is_array()) {
    std::ostringstream os;
    bool first = true;
    for (const auto& elem : j) {
      if (!first) os << ',';
      first = false;
      if (elem.is_array()) {  // pair entries such as atom [location, mass]
        if (elem.size() != 2 || !elem[0].is_number() || !elem[1].is_number())
          throw ConfigError("key '" + prefix + "': array pairs must be two numbers");
        os << num17(elem[0].get<double>()) << ':' << num17(elem[1].get<double>());
      } else if (elem.is_number()) {
        os << num17(elem.get<double>());
      } else {
        throw ConfigError("key '" + prefix + "': unsupported array element type");
      }
    }
    value = os.str();
  } else if (j.is_boolean()) {
    value = j.get<bool>() ? "true" : "false";
  } else if (j.is_number()) {
    value = num17(j.get<double>());
  } else {
    throw ConfigError("key '" + prefix + "': unsupported JSON value type");
  }
  if (out.kv.count(prefix)) throw ConfigError("duplicate key '" + prefix + "'");
  out.kv[prefix] = value;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string ParsedConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ParsedConfig::get_number(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("missing required key '" + key + "'");
  return parse_number(key, it->second, line_of(*this, key));
}

double ParsedConfig::get_number(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  return parse_number(key, it->second, line_of(*this, key));
}

long long ParsedConfig::get_integer(const std::string& key, long long fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string v = trim(it->second);
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) {
    // Tolerate JSON-style floats that are exact integers (e.g. "100000.0").
    const double d = parse_number(key, v, line_of(*this, key));
    const long long r = static_cast<long long>(d);
    if (static_cast<double>(r) == d) return r;
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'",
                      line_of(*this, key));
  }
  return x;
}

bool ParsedConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::string v = trim(it->second);
  for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'",
                    line_of(*this, key));
}

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig out;
  // JSON document: first non-space character is '{'.
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  if (first < text.size() && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what(),
                        line_of_byte(text, e.byte));
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    flatten_json(j, "", out);
    return out;
  }
  // Flat key = value lines.
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (out.kv.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
    out.kv[key] = value;
    out.lines[key] = lineno;
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

namespace {

void reject_unknown_levy_keys(const ParsedConfig& cfg,
                              const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : cfg.kv) {
    (void)value;
    if (key.rfind("levy.", 0) != 0) continue;
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ConfigError("unexpected key '" + key + "' for this levy.kind",
                        line_of(cfg, key));
  }
}

// Constructs the measure, converting validation failures into line-anchored
// config errors (ConfigError already carries its own anchor, pass it through).
LevyMeasure checked_levy(LevyMeasure::Variant v, int line) {
  try {
    return LevyMeasure{std::move(v)};
  } catch (const ConfigError&) {
    throw;
  } catch (const SpecError& e) {
    throw ConfigError(e.what(), line);
  }
}

LevyMeasure build_levy(const ParsedConfig& cfg) {
  const std::string kind = cfg.get_string("levy.kind", "none");
  const int kind_line = line_of(cfg, "levy.kind");
  if (kind == "none") {
    reject_unknown_levy_keys(cfg, {"levy.kind"});
    return LevyMeasure{};
  }
  if (kind == "exponential") {
    reject_unknown_levy_keys(cfg, {"levy.kind", "levy.rate", "levy.arrival"});
    ExponentialJumps e;
    e.rate = cfg.get_number("levy.rate");
    e.arrival = cfg.get_number("levy.arrival");
    return checked_levy(e, kind_line);
  }
  if (kind == "gamma") {
    reject_unknown_levy_keys(cfg, {"levy.kind", "levy.mass", "levy.shape", "levy.scale"});
    GammaJumps g;
    g.mass = cfg.get_number("levy.mass");
    g.shape = cfg.get_number("levy.shape");
    g.scale = cfg.get_number("levy.scale");
    return checked_levy(g, kind_line);
  }
  if (kind == "stable") {
    reject_unknown_levy_keys(cfg, {"levy.kind", "levy.index", "levy.tempering"});
    StableJumps s;
    s.index = cfg.get_number("levy.index");
    s.tempering = cfg.get_number("levy.tempering", 0.0);
    return checked_levy(s, kind_line);
  }
  if (kind == "atoms") {
    reject_unknown_levy_keys(cfg, {"levy.kind", "levy.atoms"});
    const std::string text = cfg.get_string("levy.atoms");
    const int line = line_of(cfg, "levy.atoms");
    if (text.empty()) throw ConfigError("missing required key 'levy.atoms'", kind_line);
    AtomJumps a;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::size_t colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("levy.atoms entries must be 'location:mass', got '" + trim(item) +
                              "'",
                          line);
      a.atoms.emplace_back(parse_number("levy.atoms", item.substr(0, colon), line),
                           parse_number("levy.atoms", item.substr(colon + 1), line));
    }
    return checked_levy(a, line);
  }
  if (kind == "tabulated") {
    reject_unknown_levy_keys(cfg, {"levy.kind", "levy.x", "levy.tail"});
    TabulatedTail t;
    t.x = parse_number_list("levy.x", cfg.get_string("levy.x"), line_of(cfg, "levy.x"));
    t.tail =
        parse_number_list("levy.tail", cfg.get_string("levy.tail"), line_of(cfg, "levy.tail"));
    if (t.x.size() != t.tail.size())
      throw ConfigError("levy.x and levy.tail must have the same length",
                        line_of(cfg, "levy.tail"));
    return checked_levy(t, line_of(cfg, "levy.tail"));
  }
  throw ConfigError("unknown levy.kind '" + kind + "'", kind_line);
}

}  // namespace

SubordinatorSpec build_spec(const ParsedConfig& cfg) {
  const double q = cfg.get_number("kill", 0.0);
  const double a = cfg.get_number("drift", 0.0);
  const std::string label = cfg.get_string("label", "");
  LevyMeasure levy = build_levy(cfg);
  try {
    return SubordinatorSpec(q, a, std::move(levy), label);
  } catch (const ConfigError&) {
    throw;
  } catch (const SpecError& e) {
    throw ConfigError(e.what(), line_of(cfg, "kill"));
  }
}

SimConfig build_sim_config(const ParsedConfig& cfg) {
  SimConfig sim;
  sim.seed = static_cast<std::uint64_t>(cfg.get_integer("sim.seed", static_cast<long long>(sim.seed)));
  sim.n_samples = static_cast<std::size_t>(
      cfg.get_integer("sim.n", static_cast<long long>(sim.n_samples)));
  sim.epsilon = cfg.get_number("sim.epsilon", sim.epsilon);
  sim.compensate = cfg.get_bool("sim.compensate", sim.compensate);
  sim.workers = static_cast<int>(cfg.get_integer("sim.workers", sim.workers));
  sim.event_budget = static_cast<std::uint64_t>(
      cfg.get_integer("sim.event_budget", static_cast<long long>(sim.event_budget)));
  return sim;
}

std::string spec_to_config(const SubordinatorSpec& spec) {
  std::ostringstream os;
  os << "kill = " << num17(spec.kill_rate()) << "\n";
  os << "drift = " << num17(spec.drift()) << "\n";
  const auto& raw = spec.levy().raw();
  if (std::holds_alternative<NoJumps>(raw)) {
    os << "levy.kind = none\n";
  } else if (const auto* e = std::get_if<ExponentialJumps>(&raw)) {
    os << "levy.kind = exponential\n";
    os << "levy.rate = " << num17(e->rate) << "\n";
    os << "levy.arrival = " << num17(e->arrival) << "\n";
  } else if (const auto* g = std::get_if<GammaJumps>(&raw)) {
    os << "levy.kind = gamma\n";
    os << "levy.mass = " << num17(g->mass) << "\n";
    os << "levy.shape = " << num17(g->shape) << "\n";
    os << "levy.scale = " << num17(g->scale) << "\n";
  } else if (const auto* s = std::get_if<StableJumps>(&raw)) {
    os << "levy.kind = stable\n";
    os << "levy.index = " << num17(s->index) << "\n";
    os << "levy.tempering = " << num17(s->tempering) << "\n";
  } else if (const auto* a = std::get_if<AtomJumps>(&raw)) {
    os << "levy.kind = atoms\n";
    os << "levy.atoms = ";
    bool first = true;
    for (const auto& [loc, mass] : a->atoms) {
      if (!first) os << ",";
      first = false;
      os << num17(loc) << ":" << num17(mass);
    }
    os << "\n";
  } else if (const auto* t = std::get_if<TabulatedTail>(&raw)) {
    os << "levy.kind = tabulated\n";
    os << "levy.x = ";
    for (std::size_t i = 0; i < t->x.size(); ++i) os << (i ? "," : "") << num17(t->x[i]);
    os << "\nlevy.tail = ";
    for (std::size_t i = 0; i < t->tail.size(); ++i)
      os << (i ? "," : "") << num17(t->tail[i]);
    os << "\n";
  } else {
    throw SpecError("a time-changed spec has no flat-config serialization");
  }
  if (!spec.label().empty()) os << "label = " << spec.label() << "\n";
  return os.str();
}

}  // namespace subord
