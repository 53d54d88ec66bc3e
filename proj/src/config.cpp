#include "syncarena/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "syncarena/errors.hpp"

namespace syncarena {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

struct Line {
  int number;
  std::string section;
  std::string key;
  std::string value;
  std::string raw;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line) + ": " + what);
}

// key=value with no spaces around '='.
std::pair<std::string_view, std::string_view> split_assign(std::string_view token) {
  const auto eq = token.find('=');
  if (eq == std::string_view::npos) return {token, {}};
  return {token.substr(0, eq), token.substr(eq + 1)};
}

TimedEvent parse_event(std::string_view text, const std::string& origin, int line) {
  const auto tokens = split_ws(text);
  if (tokens.size() < 2) fail(origin, line, "event needs 't=<s> set key=value ...'");
  const auto [tkey, tval] = split_assign(tokens[0]);
  if (tkey != "t" || tval.empty()) fail(origin, line, "event must start with t=<seconds>");
  if (tokens[1] != "set") fail(origin, line, "expected 'set' after the event time");
  TimedEvent e;
  try {
    e.t = parse_double(tval);
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto [k, v] = split_assign(tokens[i]);
      if (v.empty()) fail(origin, line, "expected key=value, got '" + std::string(tokens[i]) + "'");
      e.sets.push_back({std::string(k), parse_double(v)});
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::ConfigError && std::string(err.what()).find(origin) == std::string::npos) {
      fail(origin, line, err.what());
    }
    throw;
  }
  if (e.sets.empty()) fail(origin, line, "event sets nothing");
  return e;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto res = std::from_chars(begin, text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ConfigError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

ScenarioSpec parse_config(std::istream& in, const std::string& origin) {
  std::vector<Line> lines;
  std::vector<std::pair<int, std::string>> event_lines;
  bool has_events = false;
  std::string section;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, number, "unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      static const char* known[] = {"base", "grid", "gfl", "gfm", "events", "solver"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        fail(origin, number, "unknown section [" + section + "]");
      }
      if (section == "events") has_events = true;
      continue;
    }
    if (section == "events") {
      event_lines.emplace_back(number, std::string(s));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) fail(origin, number, "expected key = value");
    lines.push_back({number, section, std::string(trim(s.substr(0, eq))),
                     std::string(trim(s.substr(eq + 1))), raw});
  }

  // Preset and variant first: they decide the starting point.
  std::optional<std::string> preset;
  int preset_line = 0;
  std::optional<Variant> variant;
  for (const Line& l : lines) {
    if (l.section.empty() && l.key == "preset") {
      preset = l.value;
      preset_line = l.number;
    }
    if (l.section == "solver" && l.key == "variant") {
      variant = parse_variant(l.value);
      if (!variant) fail(origin, l.number, "unknown variant '" + l.value + "'");
    }
  }

  ScenarioSpec spec;
  try {
    if (preset) {
      const Preset p = find_preset(*preset);
      spec = make_scenario(p, variant.value_or(p.variant));
    } else {
      spec.step = {1e-4, 5.0, 10};
      if (variant) spec.variant = *variant;
    }
  } catch (const Error& e) {
    fail(origin, preset_line, e.what());
  }

  for (const Line& l : lines) {
    try {
      if (l.section.empty()) {
        if (l.key == "preset") continue;
        if (l.key == "fault") {
          set_param(spec.plant, "fault", parse_double(l.value));
          continue;
        }
        fail(origin, l.number, "unknown top-level key '" + l.key + "'");
      }
      if (l.section == "solver") {
        if (l.key == "variant") continue;
        if (l.key == "dt") {
          spec.step.dt = parse_double(l.value);
        } else if (l.key == "t_end") {
          spec.step.t_end = parse_double(l.value);
        } else if (l.key == "record_every") {
          const double v = parse_double(l.value);
          if (!(v >= 1.0) || v != std::floor(v)) fail(origin, l.number, "record_every must be a positive integer");
          spec.step.record_every = static_cast<int>(v);
        } else if (l.key == "init") {
          if (l.value == "sep") {
            spec.init = InitPolicy::StartAtSep;
          } else if (l.value == "explicit") {
            spec.init = InitPolicy::Explicit;
          } else {
            fail(origin, l.number, "init must be sep or explicit");
          }
        } else if (l.key == "delta0") {
          spec.init_state(0) = parse_double(l.value);
        } else if (l.key == "delta_dot0") {
          spec.init_state(1) = parse_double(l.value);
        } else {
          fail(origin, l.number, "unknown solver key '" + l.key + "'");
        }
        continue;
      }
      set_param(spec.plant, l.section + "." + l.key, parse_double(l.value));
    } catch (const Error& e) {
      if (std::string(e.what()).find(origin + ":") != std::string::npos) throw;
      fail(origin, l.number, e.what());
    }
  }

  if (has_events) {
    spec.events.clear();
    for (const auto& [n, text] : event_lines) {
      TimedEvent e = parse_event(text, origin, n);
      PlantParams probe = spec.plant;
      try {
        apply_sets(probe, e.sets);
      } catch (const Error& err) {
        fail(origin, n, err.what());
      }
      spec.events.push_back(std::move(e));
    }
  }
  spec.preset = preset.value_or("");
  return spec;
}

ScenarioSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

std::string write_config(const ScenarioSpec& spec) {
  std::ostringstream os;
  if (!spec.preset.empty()) os << "preset = " << spec.preset << '\n';
  os << "fault = " << format_double(get_param(spec.plant, "fault")) << '\n';
  for (const std::string section : {"base", "grid", "gfl", "gfm"}) {
    os << "\n[" << section << "]\n";
    for (const std::string& key : param_keys()) {
      if (key.rfind(section + ".", 0) != 0) continue;
      os << key.substr(section.size() + 1) << " = " << format_double(get_param(spec.plant, key))
         << '\n';
    }
  }
  os << "\n[solver]\n";
  os << "variant = " << variant_name(spec.variant) << '\n';
  os << "dt = " << format_double(spec.step.dt) << '\n';
  os << "t_end = " << format_double(spec.step.t_end) << '\n';
  os << "record_every = " << spec.step.record_every << '\n';
  os << "init = " << to_string(spec.init) << '\n';
  os << "delta0 = " << format_double(spec.init_state(0)) << '\n';
  os << "delta_dot0 = " << format_double(spec.init_state(1)) << '\n';
  os << "\n[events]\n";
  for (const TimedEvent& e : spec.events) {
    os << "t=" << format_double(e.t) << " set";
    for (const ParamSet& s : e.sets) os << ' ' << s.key << '=' << format_double(s.value);
    os << '\n';
  }
  return os.str();
}

}  // namespace syncarena
