#pragma once

// Source-design configuration files.
//
//   # PPKTP, type-II, 800 nm → 800 nm + 800 nm
//   material    = PPKTP-800-typeII      # built-in name, or a record from materials_db
//   materials_db = my_crystals.db        # optional, path relative to this file
//   lambda_s    = 800 nm
//   lambda_i    = 800 nm
//   degenerate  = false                  # true: a single down-converted field
//   length      = 1 cm
//   poling      = auto                   # or: poling_period = 9.2 um
//   kappa       = -3.0                   # target κ, only with poling = auto
//   focus       = optimal                # or: z_R = 1.8 mm, or: zeta_R = 0.18
//   pump_power  = 1 mW
//   filter_s    = lorentzian 2 MHz       # or: unfiltered, or: file filters/etalon.txt
//   filter_i    = lorentzian 2 MHz
//   pm_bandwidth = 100 GHz               # optional, enables the narrow-band warning
//
// Inline constants replace `material`: n_s, n_i, n_p (plain numbers) and
// d_eff (with unit, e.g. 2.4 pm/V). Every dimensioned value carries its unit.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdc/filters.hpp"
#include "spdc/units.hpp"

namespace spdc {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration: ";
    for (std::size_t j = 0; j < v.size(); ++j) s += (j ? "; " : "") + v[j];
    return s;
  }
  std::vector<std::string> issues_;
};

struct FilterChoice {
  enum class Kind { lorentzian, unfiltered, file } kind = Kind::unfiltered;
  double gamma = 0.0;  // rad/s
  std::string path;    // resolved against the config directory
};

struct InlineMaterial {
  double n_s = 0.0, n_i = 0.0, n_p = 0.0;
  double d_eff = 0.0;
};

struct RunConfig {
  std::optional<std::string> material;
  std::optional<std::string> materials_db;
  std::optional<InlineMaterial> inline_material;
  double lambda_s = 0.0;
  double lambda_i = 0.0;
  bool degenerate = false;
  double length = 0.0;
  bool auto_poling = false;
  std::optional<double> poling_period;
  std::optional<double> target_kappa;
  enum class Focus { rayleigh_range, zeta_R, optimal } focus = Focus::optimal;
  double rayleigh_range = 0.0;
  double zeta_R = 0.0;
  double pump_power = 0.0;
  FilterChoice filter_s;
  FilterChoice filter_i;
  std::optional<double> pm_bandwidth;
  std::string format = "table";
};

namespace detail {

struct ConfigEntry {
  std::string value;
  int line;
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "material", "materials_db", "n_s",    "n_i",        "n_p",      "d_eff",    "lambda_s",
      "lambda_i", "degenerate",   "length", "poling",     "poling_period", "kappa", "focus",
      "z_R",      "zeta_R",       "pump_power", "filter_s", "filter_i", "pm_bandwidth", "format"};
  return keys;
}

}  // namespace detail

/// Parses a configuration; every problem found is reported together.
inline RunConfig parse_run_config(std::istream& in, const std::string& origin = "<config>",
                                  const std::filesystem::path& base_dir = {}) {
  std::vector<std::string> issues;
  std::map<std::string, detail::ConfigEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t(trim(line));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      issues.push_back(where + ": expected 'key = value'");
      continue;
    }
    const std::string key(trim(std::string_view(t).substr(0, eq)));
    const std::string value(trim(std::string_view(t).substr(eq + 1)));
    const auto& keys = detail::config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      issues.push_back(where + ": unknown key '" + key + "'");
      continue;
    }
    if (entries.count(key)) {
      issues.push_back(where + ": '" + key + "' given twice");
      continue;
    }
    entries[key] = {value, line_no};
  }

  RunConfig cfg;
  auto has = [&](const char* k) { return entries.count(k) > 0; };
  auto at = [&](const std::string& k) { return origin + ":" + std::to_string(entries.at(k).line) + ": " + k; };

  // Quantity with a unit of the expected dimension; returns SI or nullopt.
  auto quantity = [&](const std::string& key, std::initializer_list<const char*> units,
                      bool required) -> std::optional<double> {
    if (!entries.count(key)) {
      if (required) issues.push_back(origin + ": missing '" + key + "'");
      return std::nullopt;
    }
    try {
      const Quantity q = parse_quantity(entries.at(key).value);
      bool ok = false;
      for (const char* u : units) ok = ok || q.unit == u;
      if (!ok) {
        std::string list;
        for (const char* u : units) list += std::string(list.empty() ? "" : ", ") + u;
        issues.push_back(at(key) + ": unit '" + q.unit + "' not accepted (use " + list + ")");
        return std::nullopt;
      }
      return q.si();
    } catch (const std::exception& e) {
      issues.push_back(at(key) + ": " + e.what());
      return std::nullopt;
    }
  };
  auto number = [&](const std::string& key) -> std::optional<double> {
    try {
      const Quantity q = parse_quantity(entries.at(key).value);
      if (!q.unit.empty()) {
        issues.push_back(at(key) + ": takes a plain number");
        return std::nullopt;
      }
      return q.value;
    } catch (const std::exception& e) {
      issues.push_back(at(key) + ": " + e.what());
      return std::nullopt;
    }
  };
  auto positive = [&](const std::string& key, std::optional<double> v) {
    if (v && !(*v > 0.0)) {
      issues.push_back(at(key) + ": must be positive");
      return std::optional<double>{};
    }
    return v;
  };

  static const std::initializer_list<const char*> kLength{"m", "cm", "mm", "um", "\xC2\xB5m", "nm"};
  static const std::initializer_list<const char*> kFreq{"Hz", "kHz", "MHz", "GHz", "rad/s"};

  // Material.
  const bool inline_keys = has("n_s") || has("n_i") || has("n_p") || has("d_eff");
  if (has("material") && inline_keys) {
    issues.push_back(origin + ": give either 'material' or inline n_s/n_i/n_p/d_eff, not both");
  } else if (has("material")) {
    cfg.material = entries.at("material").value;
    if (has("materials_db")) cfg.materials_db = (base_dir / entries.at("materials_db").value).string();
  } else if (inline_keys) {
    InlineMaterial m;
    bool ok = true;
    for (const char* k : {"n_s", "n_i", "n_p"}) {
      if (!has(k)) {
        issues.push_back(origin + ": missing '" + std::string(k) + "' for inline material");
        ok = false;
        continue;
      }
      const auto v = number(k);
      if (v && !(*v >= 1.0)) issues.push_back(at(k) + ": refractive index must be >= 1");
      if (!v || !(*v >= 1.0)) ok = false;
      else (k[2] == 's' ? m.n_s : k[2] == 'i' ? m.n_i : m.n_p) = *v;
    }
    const auto d = positive("d_eff", quantity("d_eff", {"pm/V", "m/V"}, true));
    if (d) m.d_eff = *d;
    else ok = false;
    if (ok) cfg.inline_material = m;
    if (has("materials_db")) issues.push_back(at("materials_db") + ": only meaningful with 'material'");
  } else {
    issues.push_back(origin + ": missing 'material' (or inline n_s, n_i, n_p, d_eff)");
  }

  if (auto v = positive("lambda_s", quantity("lambda_s", kLength, true))) cfg.lambda_s = *v;
  if (auto v = positive("lambda_i", quantity("lambda_i", kLength, true))) cfg.lambda_i = *v;
  if (has("degenerate")) {
    const std::string& v = entries.at("degenerate").value;
    if (v == "true") cfg.degenerate = true;
    else if (v == "false") cfg.degenerate = false;
    else issues.push_back(at("degenerate") + ": expected true or false");
  }
  if (cfg.degenerate && cfg.lambda_s > 0 && cfg.lambda_i > 0 && cfg.lambda_s != cfg.lambda_i) {
    issues.push_back(origin + ": degenerate = true needs lambda_s == lambda_i");
  }
  if (auto v = positive("length", quantity("length", kLength, true))) cfg.length = *v;

  // Poling: exactly one of auto / explicit period.
  const bool auto_p = has("poling");
  if (auto_p && entries.at("poling").value != "auto") {
    issues.push_back(at("poling") + ": only 'auto' is accepted (use poling_period for a fixed period)");
  }
  if (auto_p == has("poling_period")) {
    issues.push_back(origin + ": give exactly one of 'poling = auto' or 'poling_period'");
  } else if (auto_p) {
    cfg.auto_poling = true;
  } else if (auto v = positive("poling_period", quantity("poling_period", kLength, true))) {
    cfg.poling_period = *v;
  }
  if (has("kappa")) {
    if (!auto_p) issues.push_back(at("kappa") + ": target kappa only applies with 'poling = auto'");
    else if (auto v = number("kappa")) cfg.target_kappa = *v;
  }

  // Focus: exactly one of z_R / zeta_R / focus = optimal.
  const int n_focus = int(has("z_R")) + int(has("zeta_R")) + int(has("focus"));
  if (n_focus != 1) {
    issues.push_back(origin + ": give exactly one of 'z_R', 'zeta_R' or 'focus = optimal'");
  } else if (has("focus")) {
    if (entries.at("focus").value != "optimal") issues.push_back(at("focus") + ": only 'optimal' is accepted");
    cfg.focus = RunConfig::Focus::optimal;
  } else if (has("z_R")) {
    cfg.focus = RunConfig::Focus::rayleigh_range;
    if (auto v = positive("z_R", quantity("z_R", kLength, true))) cfg.rayleigh_range = *v;
  } else {
    cfg.focus = RunConfig::Focus::zeta_R;
    if (auto v = number("zeta_R")) {
      if (*v > 0.0) cfg.zeta_R = *v;
      else issues.push_back(at("zeta_R") + ": must be positive");
    }
  }

  if (auto v = quantity("pump_power", {"W", "mW", "uW"}, true)) {
    if (*v >= 0.0) cfg.pump_power = *v;
    else issues.push_back(at("pump_power") + ": must be >= 0");
  }

  auto filter = [&](const char* key) {
    FilterChoice f;
    if (!has(key)) {
      issues.push_back(origin + ": missing '" + std::string(key) + "'");
      return f;
    }
    std::istringstream ss(entries.at(key).value);
    std::string kind;
    ss >> kind;
    std::string rest;
    std::getline(ss, rest);
    rest = std::string(trim(rest));
    if (kind == "unfiltered" && rest.empty()) {
      f.kind = FilterChoice::Kind::unfiltered;
    } else if (kind == "lorentzian") {
      f.kind = FilterChoice::Kind::lorentzian;
      try {
        const Quantity q = parse_quantity(rest);
        bool ok = false;
        for (const char* u : kFreq) ok = ok || q.unit == u;
        if (!ok) issues.push_back(at(key) + ": Lorentzian width needs a frequency unit");
        else if (!(q.si() > 0.0)) issues.push_back(at(key) + ": Lorentzian width must be positive");
        else f.gamma = q.si();
      } catch (const std::exception& e) {
        issues.push_back(at(key) + ": " + e.what());
      }
    } else if (kind == "file" && !rest.empty()) {
      f.kind = FilterChoice::Kind::file;
      f.path = (base_dir / rest).string();
    } else {
      issues.push_back(at(key) + ": expected 'lorentzian <width>', 'unfiltered' or 'file <path>'");
    }
    return f;
  };
  cfg.filter_s = filter("filter_s");
  cfg.filter_i = filter("filter_i");
  if (cfg.filter_s.kind == FilterChoice::Kind::unfiltered && cfg.filter_i.kind == FilterChoice::Kind::unfiltered &&
      has("filter_s") && has("filter_i")) {
    issues.push_back(origin + ": at least one arm must be filtered");
  }
  if (has("pm_bandwidth")) cfg.pm_bandwidth = positive("pm_bandwidth", quantity("pm_bandwidth", kFreq, true));
  if (has("format")) {
    cfg.format = entries.at("format").value;
    if (cfg.format != "table" && cfg.format != "csv" && cfg.format != "ndjson") {
      issues.push_back(at("format") + ": expected table, csv or ndjson");
    }
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config '" + path + "'"});
  return parse_run_config(in, path, std::filesystem::path(path).parent_path());
}

inline FilterSpec make_filter(const FilterChoice& c) {
  switch (c.kind) {
    case FilterChoice::Kind::lorentzian: return Lorentzian{c.gamma};
    case FilterChoice::Kind::file: return load_tabulated_filter(c.path);
    case FilterChoice::Kind::unfiltered: break;
  }
  return Unfiltered{};
}

}  // namespace spdc
