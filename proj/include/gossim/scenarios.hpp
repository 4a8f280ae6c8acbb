#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gossim/engine_params.hpp"
#include "gossim/mobility.hpp"
#include "gossim/protocols.hpp"
#include "gossim/radio.hpp"
#include "gossim/rng.hpp"

namespace gossim {

struct ClusterSpec {
  std::uint32_t node_count = 0;
  AreaRect area;
  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

/// Roaming nodes that bridge otherwise disjoint clusters. They run the same
/// protocol as everyone else; only their area differs.
struct TransmitterSpec {
  std::uint32_t count = 0;
  AreaRect area;
  friend bool operator==(const TransmitterSpec&, const TransmitterSpec&) = default;
};

struct ScenarioSpec {
  std::string name = "custom";
  std::vector<ClusterSpec> clusters;
  std::optional<TransmitterSpec> transmitters;
  MobilityParams mobility;
  RadioParams radio;
  EngineParams engine;
  ProtocolConfig protocol = ProtocolConfig::gcp(5);
  std::uint64_t seed = 0;
  std::optional<std::string> trace;  // contact-trace CSV; replaces geometry

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;

  /// Node count in geometric mode. Trace mode takes it from the trace.
  std::size_t geometric_node_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.node_count;
    if (transmitters) n += transmitters->count;
    return n;
  }
};

/// Syntax problem in a config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A well-formed config that describes an invalid scenario.
class SemanticError : public std::runtime_error {
 public:
  SemanticError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline void validate(const ScenarioSpec& s) {
  if (s.trace) {
    if (!s.clusters.empty()) throw SemanticError("cluster", "trace mode excludes clusters");
    if (s.transmitters) throw SemanticError("transmitters", "trace mode excludes transmitters");
  } else {
    if (s.clusters.empty()) throw SemanticError("cluster", "at least one cluster is required");
    for (std::size_t i = 0; i < s.clusters.size(); ++i) {
      const auto field = "cluster[" + std::to_string(i) + "]";
      if (s.clusters[i].node_count == 0) throw SemanticError(field + ".nodes", "nodes must be > 0");
      if (!s.clusters[i].area.valid()) throw SemanticError(field + ".area", "area must satisfy x_min < x_max and y_min < y_max");
    }
    if (s.transmitters) {
      if (s.transmitters->count == 0) throw SemanticError("transmitters.count", "count must be > 0");
      if (!s.transmitters->area.valid())
        throw SemanticError("transmitters.area", "area must satisfy x_min < x_max and y_min < y_max");
    }
  }
  const auto& r = s.radio;
  if (!(r.r > 0.0)) throw SemanticError("radio.r", "r must be > 0");
  if (!(r.r < r.R)) throw SemanticError("radio.r", "r must be < R");
  if (!(r.p_min > 0.0 && r.p_min <= 1.0)) throw SemanticError("radio.p_min", "p_min must be in (0, 1]");
  const auto& m = s.mobility;
  if (m.pause_max < 0) throw SemanticError("mobility.pause_max_ms", "must be >= 0");
  if (m.leg_duration_min <= 0) throw SemanticError("mobility.leg_duration_min_ms", "must be > 0");
  if (m.leg_duration_max < m.leg_duration_min)
    throw SemanticError("mobility.leg_duration_max_ms", "must be >= leg_duration_min_ms");
  if (!(m.speed_min > 0.0)) throw SemanticError("mobility.speed_min", "must be > 0");
  if (!(m.speed_max >= m.speed_min)) throw SemanticError("mobility.speed_max", "must be >= speed_min");
  const auto& e = s.engine;
  if (e.beacon_period <= 0) throw SemanticError("engine.beacon_period_ms", "must be > 0");
  if (e.delivery_latency <= 0) throw SemanticError("engine.delivery_latency_ms", "must be > 0");
  if (e.duration <= 0) throw SemanticError("engine.duration_ms", "must be > 0");
  if (e.injection_time < 0 || e.injection_time >= e.duration)
    throw SemanticError("engine.injection_time_ms", "must be in [0, duration_ms)");
  if (e.injected_version.value == 0) throw SemanticError("engine.injected_version", "must be > 0 (0 is the factory image)");
  if (!(e.corruption_probability >= 0.0 && e.corruption_probability < 1.0))
    throw SemanticError("engine.corruption_probability", "must be in [0, 1)");
  if (s.protocol.token_control && s.protocol.initial_tokens == 0)
    throw SemanticError("protocol.tokens", "tokens must be positive when token_control is on");
  if (!s.protocol.token_control && s.protocol.initial_tokens != 0)
    throw SemanticError("protocol.tokens", "tokens given without token_control");
}

namespace detail {

// g x g grid of square tiles with edge `side`, separated by `gap`, row-major.
inline std::vector<AreaRect> tiles(int g, double side, double gap) {
  std::vector<AreaRect> out;
  for (int row = 0; row < g; ++row) {
    for (int col = 0; col < g; ++col) {
      const double x0 = col * (side + gap);
      const double y0 = row * (side + gap);
      out.push_back({x0, y0, x0 + side, y0 + side});
    }
  }
  return out;
}

inline std::vector<ClusterSpec> clusters_on(const std::vector<AreaRect>& areas, std::uint32_t nodes) {
  std::vector<ClusterSpec> out;
  for (const auto& a : areas) out.push_back({nodes, a});
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"c1", "c1-sparse", "c2", "c2-social", "c4", "c4-social", "c9", "c9-social"};
  return names;
}

/// The eight synthetic workloads.
///
/// Tiled layouts (c4, c9) share borders. Socializing layouts place the
/// clusters on the same grid but spread across the whole roaming area with
/// equal gaps, so only transmitters can carry the update between them.
/// c2's rectangles overlap in a 100 x 100 square at their facing corners.
inline ScenarioSpec builtin(std::string_view name) {
  ScenarioSpec s;
  s.name = std::string(name);
  if (name == "c1") {
    s.clusters = {{2000, {0, 0, 250, 250}}};
  } else if (name == "c1-sparse") {
    s.clusters = {{2000, {0, 0, 1100, 1100}}};
  } else if (name == "c2") {
    s.clusters = {{1000, {0, 0, 800, 800}}, {1000, {700, 700, 1500, 1500}}};
  } else if (name == "c2-social") {
    // Diagonal cells of a 2 x 2 layout over 2000 x 2000.
    s.clusters = {{950, {0, 0, 800, 800}}, {950, {1200, 1200, 2000, 2000}}};
    s.transmitters = TransmitterSpec{100, {0, 0, 2000, 2000}};
  } else if (name == "c4") {
    s.clusters = detail::clusters_on(detail::tiles(2, 550, 0), 500);
  } else if (name == "c4-social") {
    s.clusters = detail::clusters_on(detail::tiles(2, 550, 200), 475);
    s.transmitters = TransmitterSpec{100, {0, 0, 1300, 1300}};
  } else if (name == "c9") {
    s.clusters = detail::clusters_on(detail::tiles(3, 400, 0), 250);
  } else if (name == "c9-social") {
    s.clusters = detail::clusters_on(detail::tiles(3, 400, 150), 240);
    s.transmitters = TransmitterSpec{90, {0, 0, 1500, 1500}};
  } else {
    throw SemanticError("builtin", "unknown builtin scenario '" + std::string(name) + "'");
  }
  return s;
}

/// Desk-sized copy: node counts / 10 and every coordinate / sqrt(10), which
/// keeps node density and layout shape unchanged.
inline ScenarioSpec desk_scale(ScenarioSpec s) {
  const double k = 1.0 / std::sqrt(10.0);
  auto shrink = [&](AreaRect a) { return AreaRect{a.x_min * k, a.y_min * k, a.x_max * k, a.y_max * k}; };
  auto fewer = [](std::uint32_t n) { return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(n / 10.0))); };
  for (auto& c : s.clusters) {
    c.node_count = fewer(c.node_count);
    c.area = shrink(c.area);
  }
  if (s.transmitters) {
    s.transmitters->count = fewer(s.transmitters->count);
    s.transmitters->area = shrink(s.transmitters->area);
  }
  return s;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_area(const AreaRect& a) {
  return fmt_double(a.x_min) + " " + fmt_double(a.y_min) + " " + fmt_double(a.x_max) + " " + fmt_double(a.y_max);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Canonical config text. Every field is written explicitly, so
/// parse(render(s)) == s.
inline std::string render(const ScenarioSpec& s) {
  using detail::fmt_double;
  std::ostringstream o;
  o << "name = " << s.name << "\n";
  o << "seed = " << s.seed << "\n";
  if (s.trace) o << "trace = " << *s.trace << "\n";
  o << "\n[mobility]\n";
  o << "pause_max_ms = " << s.mobility.pause_max << "\n";
  o << "leg_duration_min_ms = " << s.mobility.leg_duration_min << "\n";
  o << "leg_duration_max_ms = " << s.mobility.leg_duration_max << "\n";
  o << "speed_min = " << fmt_double(s.mobility.speed_min) << "\n";
  o << "speed_max = " << fmt_double(s.mobility.speed_max) << "\n";
  o << "\n[radio]\n";
  o << "r = " << fmt_double(s.radio.r) << "\n";
  o << "R = " << fmt_double(s.radio.R) << "\n";
  o << "p_min = " << fmt_double(s.radio.p_min) << "\n";
  o << "\n[engine]\n";
  o << "beacon_period_ms = " << s.engine.beacon_period << "\n";
  o << "delivery_latency_ms = " << s.engine.delivery_latency << "\n";
  o << "duration_ms = " << s.engine.duration << "\n";
  o << "injection_time_ms = " << s.engine.injection_time << "\n";
  o << "injected_version = " << s.engine.injected_version.value << "\n";
  o << "corruption_probability = " << fmt_double(s.engine.corruption_probability) << "\n";
  o << "payload_bytes = " << s.engine.payload_bytes << "\n";
  o << "\n[protocol]\n";
  o << "piggyback = " << (s.protocol.piggyback ? "true" : "false") << "\n";
  o << "token_control = " << (s.protocol.token_control ? "true" : "false") << "\n";
  if (s.protocol.token_control) o << "tokens = " << s.protocol.initial_tokens << "\n";
  for (const auto& c : s.clusters) {
    o << "\n[cluster]\n";
    o << "nodes = " << c.node_count << "\n";
    o << "area = " << detail::fmt_area(c.area) << "\n";
  }
  if (s.transmitters) {
    o << "\n[transmitters]\n";
    o << "count = " << s.transmitters->count << "\n";
    o << "area = " << detail::fmt_area(s.transmitters->area) << "\n";
  }
  return o.str();
}

/// Identifies a workload independently of the protocol run on it, so that
/// paired runs can be checked for matching scenario and seed.
inline std::uint64_t fingerprint(ScenarioSpec s) {
  s.protocol = ProtocolConfig::fp();
  return fnv1a64(render(s));
}

/// `section.key = value` applied after the file's own entries. Top-level
/// keys use an empty section ("seed", "trace").
struct ConfigOverride {
  std::string section;
  std::string key;
  std::string value;
};

namespace detail {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
  std::size_t line;
};

template <class T>
T parse_int(const Entry& e) {
  T v{};
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || e.value.empty())
    throw ConfigError(e.line, "'" + e.key + "' expects an integer, got '" + e.value + "'");
  return v;
}

inline double parse_real(const Entry& e) {
  double v{};
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || e.value.empty())
    throw ConfigError(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
  return v;
}

inline bool parse_bool(const Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError(e.line, "'" + e.key + "' expects true or false, got '" + e.value + "'");
}

inline AreaRect parse_area(const Entry& e) {
  std::istringstream in(e.value);
  std::string tok;
  double v[4];
  for (double& x : v) {
    if (!(in >> tok)) throw ConfigError(e.line, "'area' expects four numbers: x_min y_min x_max y_max");
    x = parse_real({e.key, tok, e.line});
  }
  if (in >> tok) throw ConfigError(e.line, "'area' expects four numbers: x_min y_min x_max y_max");
  return {v[0], v[1], v[2], v[3]};
}

inline std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections{{"", {}, 0}};
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
      const auto name = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* kSections[] = {"cluster", "transmitters", "mobility", "radio", "engine", "protocol"};
      bool known = false;
      for (const char* k : kSections) known = known || name == k;
      if (!known) throw ConfigError(lineno, "unknown section [" + name + "]");
      sections.push_back({name, {}, lineno});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(lineno, "expected 'key = value'");
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(lineno, "missing key");
    sections.back().entries.push_back({key, value, lineno});
  }
  return sections;
}

}  // namespace detail

/// Parses and validates a scenario config.
///
/// A `builtin` key seeds the spec from a named workload; any `[cluster]`
/// sections then replace its clusters and a `[transmitters]` section its
/// transmitters. Omitted fields keep their defaults. Unknown keys and
/// sections are rejected.
inline ScenarioSpec parse(std::string_view text, const std::vector<ConfigOverride>& overrides = {}) {
  auto sections = detail::tokenize(text);
  for (const auto& o : overrides) {
    if (o.section == "cluster" || o.section == "transmitters")
      throw SemanticError(o.section, "cluster and transmitter geometry cannot be overridden");
    auto it = std::find_if(sections.begin(), sections.end(), [&](const auto& s) { return s.name == o.section; });
    if (it == sections.end()) {
      sections.push_back({o.section, {}, 0});
      it = std::prev(sections.end());
    }
    it->entries.push_back({o.key, o.value, 0});
  }

  ScenarioSpec s;
  for (const auto& e : sections.front().entries) {
    if (e.key == "builtin") s = builtin(e.value);
  }

  std::vector<ClusterSpec> clusters;
  std::optional<TransmitterSpec> transmitters;
  bool saw_protocol_flags = false;
  std::optional<std::uint32_t> tokens;
  auto unknown = [](const detail::Entry& e, const std::string& section) {
    return ConfigError(e.line, "unknown key '" + e.key + "'" + (section.empty() ? "" : " in [" + section + "]"));
  };

  for (const auto& sec : sections) {
    if (sec.name.empty()) {
      for (const auto& e : sec.entries) {
        if (e.key == "builtin") continue;
        if (e.key == "name") s.name = e.value;
        else if (e.key == "seed") s.seed = detail::parse_int<std::uint64_t>(e);
        else if (e.key == "trace") s.trace = e.value;
        else throw unknown(e, sec.name);
      }
    } else if (sec.name == "cluster") {
      ClusterSpec c;
      bool has_nodes = false, has_area = false;
      for (const auto& e : sec.entries) {
        if (e.key == "nodes") c.node_count = detail::parse_int<std::uint32_t>(e), has_nodes = true;
        else if (e.key == "area") c.area = detail::parse_area(e), has_area = true;
        else throw unknown(e, sec.name);
      }
      if (!has_nodes) throw ConfigError(sec.line, "[cluster] requires 'nodes'");
      if (!has_area) throw ConfigError(sec.line, "[cluster] requires 'area'");
      clusters.push_back(c);
    } else if (sec.name == "transmitters") {
      if (transmitters) throw ConfigError(sec.line, "[transmitters] given twice");
      TransmitterSpec t;
      bool has_count = false, has_area = false;
      for (const auto& e : sec.entries) {
        if (e.key == "count") t.count = detail::parse_int<std::uint32_t>(e), has_count = true;
        else if (e.key == "area") t.area = detail::parse_area(e), has_area = true;
        else throw unknown(e, sec.name);
      }
      if (!has_count) throw ConfigError(sec.line, "[transmitters] requires 'count'");
      if (!has_area) throw ConfigError(sec.line, "[transmitters] requires 'area'");
      transmitters = t;
    } else if (sec.name == "mobility") {
      for (const auto& e : sec.entries) {
        if (e.key == "pause_max_ms") s.mobility.pause_max = detail::parse_int<Millis>(e);
        else if (e.key == "leg_duration_min_ms") s.mobility.leg_duration_min = detail::parse_int<Millis>(e);
        else if (e.key == "leg_duration_max_ms") s.mobility.leg_duration_max = detail::parse_int<Millis>(e);
        else if (e.key == "speed_min") s.mobility.speed_min = detail::parse_real(e);
        else if (e.key == "speed_max") s.mobility.speed_max = detail::parse_real(e);
        else throw unknown(e, sec.name);
      }
    } else if (sec.name == "radio") {
      for (const auto& e : sec.entries) {
        if (e.key == "r") s.radio.r = detail::parse_real(e);
        else if (e.key == "R") s.radio.R = detail::parse_real(e);
        else if (e.key == "p_min") s.radio.p_min = detail::parse_real(e);
        else throw unknown(e, sec.name);
      }
    } else if (sec.name == "engine") {
      for (const auto& e : sec.entries) {
        if (e.key == "beacon_period_ms") s.engine.beacon_period = detail::parse_int<Millis>(e);
        else if (e.key == "delivery_latency_ms") s.engine.delivery_latency = detail::parse_int<Millis>(e);
        else if (e.key == "duration_ms") s.engine.duration = detail::parse_int<Millis>(e);
        else if (e.key == "injection_time_ms") s.engine.injection_time = detail::parse_int<Millis>(e);
        else if (e.key == "injected_version") s.engine.injected_version = Version{detail::parse_int<std::uint32_t>(e)};
        else if (e.key == "corruption_probability") s.engine.corruption_probability = detail::parse_real(e);
        else if (e.key == "payload_bytes") s.engine.payload_bytes = detail::parse_int<std::uint32_t>(e);
        else throw unknown(e, sec.name);
      }
    } else if (sec.name == "protocol") {
      for (const auto& e : sec.entries) {
        if (e.key == "name") {
          const auto cfg = protocol_from_name(e.value);
          if (!cfg) throw ConfigError(e.line, "unknown protocol '" + e.value + "' (expected fp, fcp, pbp or gcp)");
          s.protocol.piggyback = cfg->piggyback;
          s.protocol.token_control = cfg->token_control;
          saw_protocol_flags = true;
        } else if (e.key == "piggyback") {
          s.protocol.piggyback = detail::parse_bool(e), saw_protocol_flags = true;
        } else if (e.key == "token_control") {
          s.protocol.token_control = detail::parse_bool(e), saw_protocol_flags = true;
        } else if (e.key == "tokens") {
          tokens = detail::parse_int<std::uint32_t>(e);
        } else {
          throw unknown(e, sec.name);
        }
      }
    }
  }

  if (!clusters.empty()) s.clusters = std::move(clusters);
  if (transmitters) s.transmitters = transmitters;
  if (tokens) {
    s.protocol.initial_tokens = *tokens;
  } else if (saw_protocol_flags && s.protocol.token_control) {
    throw SemanticError("protocol.tokens", "tokens required for fcp and gcp");
  }
  if (!s.protocol.token_control) s.protocol.initial_tokens = 0;
  validate(s);
  return s;
}

}  // namespace gossim
