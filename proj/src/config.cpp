#include "lfs/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "lfs/error.hpp"

namespace lfs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view text, int line) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("expected an integer, got '" + std::string(text) + "'", line);
  return v;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(ScenarioConfig&, std::string_view, int)> set;
  std::function<std::string(const ScenarioConfig&)> get;  // empty string: omit
};

template <class Ref>
Key real_key(const char* section, const char* name, Ref ref) {
  return {section, name,
          [ref](ScenarioConfig& c, std::string_view v, int line) { ref(c) = parse_number(v, line); },
          [ref](const ScenarioConfig& c) { return format_number(ref(c)); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(real_key("pulse", "rabi", [](auto& c) -> auto& { return c.pulse.rabi_R; }));
    k.push_back(real_key("pulse", "duration", [](auto& c) -> auto& { return c.pulse.duration_T; }));
    k.push_back(real_key("pulse", "detuning", [](auto& c) -> auto& { return c.pulse.detuning; }));

    for (const auto kind : {LocalFieldKind::B, LocalFieldKind::C}) {
      k.push_back({"medium", kind == LocalFieldKind::B ? "B" : "C",
                   [kind](ScenarioConfig& c, std::string_view v, int line) {
                     c.medium_spec.local_field = {kind, parse_number(v, line)};
                   },
                   [kind](const ScenarioConfig& c) {
                     return c.medium_spec.local_field.kind == kind
                                ? format_number(c.medium_spec.local_field.value)
                                : std::string{};
                   }});
    }
    k.push_back(real_key("medium", "gamma", [](auto& c) -> auto& { return c.medium_spec.gamma; }));
    k.push_back(real_key("medium", "gamma2", [](auto& c) -> auto& { return c.medium_spec.gamma2; }));

    k.push_back(real_key("grid", "nu_min", [](auto& c) -> auto& { return c.grid.nu_min; }));
    k.push_back(real_key("grid", "nu_max", [](auto& c) -> auto& { return c.grid.nu_max; }));
    k.push_back({"grid", "n_modes",
                 [](ScenarioConfig& c, std::string_view v, int line) { c.grid.n_modes = parse_int(v, line); },
                 [](const ScenarioConfig& c) { return std::to_string(c.grid.n_modes); }});
    k.push_back(real_key("grid", "eta", [](auto& c) -> auto& { return c.grid.eta; }));
    k.push_back(real_key("grid", "kappa", [](auto& c) -> auto& { return c.grid.kappa; }));
    k.push_back(real_key("grid", "scale", [](auto& c) -> auto& { return c.grid.intensity_scale; }));

    k.push_back(real_key("numerics", "dt", [](auto& c) -> auto& { return c.numerics.dt; }));
    k.push_back(real_key("numerics", "t_end", [](auto& c) -> auto& { return c.numerics.t_end; }));
    k.push_back({"numerics", "detection_time",
                 [](ScenarioConfig& c, std::string_view v, int line) {
                   if (trim(v) == "end")
                     c.numerics.detection_time.reset();
                   else
                     c.numerics.detection_time = parse_number(v, line);
                 },
                 [](const ScenarioConfig& c) {
                   return c.numerics.detection_time ? format_number(*c.numerics.detection_time)
                                                    : std::string("end");
                 }});
    k.push_back({"numerics", "truncation_J",
                 [](ScenarioConfig& c, std::string_view v, int line) {
                   c.numerics.truncation_J = parse_int(v, line);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.numerics.truncation_J); }});
    k.push_back(real_key("numerics", "halving_tol", [](auto& c) -> auto& { return c.numerics.halving_tol; }));
    k.push_back({"numerics", "analytic_mode",
                 [](ScenarioConfig& c, std::string_view v, int line) {
                   v = trim(v);
                   if (v == "exact") c.numerics.analytic_mode = AnalyticMode::exact;
                   else if (v == "long_pulse") c.numerics.analytic_mode = AnalyticMode::long_pulse;
                   else if (v == "short_pulse") c.numerics.analytic_mode = AnalyticMode::short_pulse;
                   else throw ConfigError("numerics.analytic_mode: expected exact|long_pulse|short_pulse", line);
                 },
                 [](const ScenarioConfig& c) {
                   switch (c.numerics.analytic_mode) {
                     case AnalyticMode::exact: return std::string("exact");
                     case AnalyticMode::long_pulse: return std::string("long_pulse");
                     default: return std::string("short_pulse");
                   }
                 }});
    k.push_back(real_key("numerics", "peak_threshold", [](auto& c) -> auto& { return c.numerics.peak_threshold; }));

    k.push_back({"output", "dir",
                 [](ScenarioConfig& c, std::string_view v, int) { c.output.dir = std::string(trim(v)); },
                 [](const ScenarioConfig& c) { return c.output.dir; }});
    k.push_back({"output", "name",
                 [](ScenarioConfig& c, std::string_view v, int) { c.output.name = std::string(trim(v)); },
                 [](const ScenarioConfig& c) { return c.output.name; }});
    k.push_back({"output", "normalization",
                 [](ScenarioConfig& c, std::string_view v, int line) {
                   v = trim(v);
                   if (v == "raw") c.output.normalization = Normalization::raw;
                   else if (v == "unit-max") c.output.normalization = Normalization::unit_max;
                   else throw ConfigError("output.normalization: expected raw|unit-max", line);
                 },
                 [](const ScenarioConfig& c) {
                   return std::string(c.output.normalization == Normalization::raw ? "raw" : "unit-max");
                 }});
    return k;
  }();
  return table;
}

const char* kSections[] = {"pulse", "medium", "grid", "numerics", "output"};

ScenarioConfig figure2(double B) {
  constexpr double R = 10.0 * std::numbers::pi;
  ScenarioConfig c;
  c.pulse = {R, 1.9, 0.0};
  c.medium_spec = {{LocalFieldKind::B, B}, 0.01, 0.0};
  c.grid = {-12.0 * R, 12.0 * R, 2001, 5.0, 1.0, 1.0};
  return c;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(std::string_view text, int line) {
  const std::string original(trim(text));
  std::string_view s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = std::numbers::pi;
    s.remove_suffix(2);
    s = trim(s);
    if (!s.empty() && s.back() == '*') {
      s.remove_suffix(1);
      s = trim(s);
    }
    if (s.empty()) return factor;
    if (s == "-") return -factor;
    if (s == "+") return factor;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("expected a number, got '" + original + "'", line);
  return v * factor;
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4",
          "weak", "detuned-0.1R", "detuned-0.8R"};
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "fig2a") c = figure2(0.32);
  else if (name == "fig2b") c = figure2(0.64);
  else if (name == "fig2c") c = figure2(0.85);
  else if (name == "fig2d") c = figure2(1.2);
  else if (name == "fig3a" || name == "fig3b") {
    const bool a = name == "fig3a";
    c = figure2(a ? 0.28 : 0.36);
    c.pulse.duration_T = a ? 0.3 : 0.5;
    c.grid.eta = 0.1;
    c.numerics.analytic_mode = AnalyticMode::short_pulse;
  } else if (name == "fig4") {
    c = figure2(0.74);
    c.pulse.duration_T = 1.0;
    c.medium_spec.gamma = 0.5;
    c.medium_spec.gamma2 = 9.0;
    c.grid.eta = 1.0;
  } else if (name == "weak") {
    c = figure2(0.1);
    c.numerics.analytic_mode = AnalyticMode::long_pulse;
  } else if (name == "detuned-0.1R" || name == "detuned-0.8R") {
    c = figure2(0.32);
    c.pulse.detuning = (name == "detuned-0.1R" ? 0.1 : 0.8) * c.pulse.rabi_R;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.output.name = std::string(name);
  return c;
}

ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base) {
  ScenarioConfig c = base;
  std::string section;
  bool seen_B = false;
  bool seen_C = false;
  int line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const char* s : kSections) known = known || section == s;
      if (!known) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);

    if (section.empty()) {
      if (key != "preset") throw ConfigError("key '" + key + "' outside a section", line_no);
      try {
        c = preset(value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_no);
      }
      continue;
    }

    const Key* match = nullptr;
    for (const Key& k : keys())
      if (section == k.section && key == k.name) match = &k;
    if (!match) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
    if (section == "medium" && key == "B") seen_B = true;
    if (section == "medium" && key == "C") seen_C = true;
    if (seen_B && seen_C) throw ConfigError("medium: give either B or C, not both", line_no);
    match->set(c, value, line_no);
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string write_config(const ScenarioConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const Key& k : keys()) {
    const std::string v = k.get(config);
    if (v.empty()) continue;
    if (current != k.section) {
      if (!current.empty()) out << '\n';
      current = k.section;
      out << '[' << current << "]\n";
    }
    out << k.name << " = " << v << '\n';
  }
  return out.str();
}

}  // namespace lfs
