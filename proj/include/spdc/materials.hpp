#pragma once

// Crystal optical constants: fixed index triples pinned to their wavelengths,
// or Sellmeier sets per field.
//
// Database grammar (one section per material):
//
//   # comment
//   [PPKTP-800-typeII]
//   type = fixed
//   n_s = 1.844
//   n_i = 1.757
//   n_p = 1.964
//   lambda_s_nm = 800
//   lambda_i_nm = 800
//   lambda_p_nm = 400
//   d_eff_pm_per_V = 2.4
//
//   [KTP-custom]
//   type = sellmeier
//   sellmeier_s = A B1 C1 [B2 C2 ...]     n² = A + Σ B_j λ²/(λ² − C_j) − D λ², λ in µm
//   ir_s = D                              optional, default 0
//   (same for _i and _p)
//   d_eff_pm_per_V = 9.5
//   lambda_min_nm = 350
//   lambda_max_nm = 1600

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdc/units.hpp"

namespace spdc {

class MaterialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Axis { signal = 0, idler = 1, pump = 2 };

inline const char* axis_suffix(Axis a) {
  switch (a) {
    case Axis::signal: return "s";
    case Axis::idler: return "i";
    case Axis::pump: return "p";
  }
  return "?";
}

struct SellmeierSet {
  double a = 1.0;
  std::vector<std::pair<double, double>> terms;  // (B_j, C_j), C_j in µm²
  double ir = 0.0;                                // D, µm⁻²

  double index(double wavelength_m) const {
    const double l2 = std::pow(wavelength_m * 1e6, 2);
    double n2 = a - ir * l2;
    for (const auto& [b, c] : terms) n2 += b * l2 / (l2 - c);
    return std::sqrt(n2);
  }
};

struct MaterialRecord {
  enum class Model { fixed, sellmeier };

  std::string name;
  Model model = Model::fixed;
  std::array<double, 3> fixed_index{};      // s, i, p
  std::array<double, 3> pinned_wavelength{};  // m
  std::array<SellmeierSet, 3> sellmeier{};
  double d_eff = 0.0;  // m/V
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Tolerance on the pinned wavelength of a fixed-index record.
inline constexpr double kPinnedWavelengthTolerance = 0.5e-9;

inline double index_at(const MaterialRecord& rec, double wavelength, Axis axis) {
  const auto k = static_cast<std::size_t>(axis);
  if (rec.model == MaterialRecord::Model::fixed) {
    if (std::abs(wavelength - rec.pinned_wavelength[k]) > kPinnedWavelengthTolerance) {
      throw MaterialError("index_at: '" + rec.name + "' only defines the " + axis_suffix(axis) + " index at " +
                          std::to_string(rec.pinned_wavelength[k] * 1e9) + " nm");
    }
    return rec.fixed_index[k];
  }
  if (wavelength < rec.lambda_min || wavelength > rec.lambda_max) {
    throw MaterialError("index_at: wavelength " + std::to_string(wavelength * 1e9) + " nm outside the range of '" +
                        rec.name + "'");
  }
  return rec.sellmeier[k].index(wavelength);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Shortest decimal text t of v·scale such that parse(t) / scale == v, so that
/// a record written in lab units reads back bit-identical.
inline std::string format_scaled(double v, double scale) {
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v * scale, std::chars_format::general, digits);
    double back = 0.0;
    std::from_chars(buf, r.ptr, back);
    if (back / scale == v) return std::string(buf, r.ptr);
  }
  return format_double(v * scale);
}

inline std::vector<double> parse_numbers(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
      throw MaterialError(where + ": '" + tok + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

inline double single_number(const std::string& text, const std::string& where) {
  const auto v = parse_numbers(text, where);
  if (v.size() != 1) throw MaterialError(where + ": expected one number");
  return v[0];
}

struct PendingSection {
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> values;  // key -> (text, line)
};

inline MaterialRecord build_record(const PendingSection& sec, const std::string& origin) {
  const std::string where = origin + ":" + std::to_string(sec.line) + " [" + sec.name + "]";
  auto get = [&](const std::string& key) -> const std::pair<std::string, int>* {
    auto it = sec.values.find(key);
    return it == sec.values.end() ? nullptr : &it->second;
  };
  auto at = [&](const std::string& key) {
    return origin + ":" + std::to_string(get(key) ? get(key)->second : sec.line);
  };
  auto require = [&](const std::string& key) -> double {
    const auto* v = get(key);
    if (!v) throw MaterialError(where + ": missing key '" + key + "'");
    return single_number(v->first, at(key));
  };

  MaterialRecord rec;
  rec.name = sec.name;
  const auto* type = get("type");
  if (!type) throw MaterialError(where + ": missing key 'type'");
  const std::string t(trim(type->first));
  if (t == "fixed") rec.model = MaterialRecord::Model::fixed;
  else if (t == "sellmeier") rec.model = MaterialRecord::Model::sellmeier;
  else throw MaterialError(at("type") + ": type must be 'fixed' or 'sellmeier'");

  rec.d_eff = require("d_eff_pm_per_V") / 1e12;
  if (!(rec.d_eff > 0.0)) throw MaterialError(at("d_eff_pm_per_V") + ": d_eff must be positive");

  const std::array<Axis, 3> axes{Axis::signal, Axis::idler, Axis::pump};
  if (rec.model == MaterialRecord::Model::fixed) {
    for (Axis a : axes) {
      const auto k = static_cast<std::size_t>(a);
      const std::string sfx = axis_suffix(a);
      rec.fixed_index[k] = require("n_" + sfx);
      if (!(rec.fixed_index[k] >= 1.0)) throw MaterialError(at("n_" + sfx) + ": index must be >= 1");
      rec.pinned_wavelength[k] = require("lambda_" + sfx + "_nm") / 1e9;
      if (!(rec.pinned_wavelength[k] > 0.0)) {
        throw MaterialError(at("lambda_" + sfx + "_nm") + ": wavelength must be positive");
      }
      if (get("sellmeier_" + sfx) || get("ir_" + sfx)) {
        throw MaterialError(where + ": Sellmeier keys are not allowed on a fixed record");
      }
    }
    const auto [lo, hi] = std::minmax_element(rec.pinned_wavelength.begin(), rec.pinned_wavelength.end());
    rec.lambda_min = get("lambda_min_nm") ? require("lambda_min_nm") / 1e9 : *lo - kPinnedWavelengthTolerance;
    rec.lambda_max = get("lambda_max_nm") ? require("lambda_max_nm") / 1e9 : *hi + kPinnedWavelengthTolerance;
  } else {
    rec.lambda_min = require("lambda_min_nm") / 1e9;
    rec.lambda_max = require("lambda_max_nm") / 1e9;
    for (Axis a : axes) {
      const auto k = static_cast<std::size_t>(a);
      const std::string sfx = axis_suffix(a);
      if (get("n_" + sfx) || get("lambda_" + sfx + "_nm")) {
        throw MaterialError(where + ": fixed-index keys are not allowed on a Sellmeier record");
      }
      const auto* coeffs = get("sellmeier_" + sfx);
      if (!coeffs) throw MaterialError(where + ": missing key 'sellmeier_" + sfx + "'");
      const auto v = parse_numbers(coeffs->first, at("sellmeier_" + sfx));
      if (v.empty() || v.size() % 2 == 0) {
        throw MaterialError(at("sellmeier_" + sfx) + ": expected A followed by (B, C) pairs");
      }
      SellmeierSet set;
      set.a = v[0];
      for (std::size_t j = 1; j + 1 < v.size(); j += 2) set.terms.emplace_back(v[j], v[j + 1]);
      if (get("ir_" + sfx)) set.ir = require("ir_" + sfx);
      rec.sellmeier[k] = set;
    }
  }
  if (!(rec.lambda_min > 0.0) || !(rec.lambda_max > rec.lambda_min)) {
    throw MaterialError(where + ": need 0 < lambda_min_nm < lambda_max_nm");
  }
  if (rec.model == MaterialRecord::Model::sellmeier) {
    // Poles inside the range, or n < 1 anywhere on it, mean unusable coefficients.
    for (std::size_t k = 0; k < 3; ++k) {
      for (const auto& [b, c] : rec.sellmeier[k].terms) {
        const double lo2 = std::pow(rec.lambda_min * 1e6, 2);
        const double hi2 = std::pow(rec.lambda_max * 1e6, 2);
        if (c >= lo2 && c <= hi2) {
          throw MaterialError(where + ": Sellmeier pole inside the valid wavelength range");
        }
      }
      for (int j = 0; j <= 200; ++j) {
        const double lam = rec.lambda_min + (rec.lambda_max - rec.lambda_min) * j / 200.0;
        const double n = rec.sellmeier[k].index(lam);
        if (!std::isfinite(n) || n < 1.0) {
          throw MaterialError(where + ": Sellmeier coefficients give n < 1 inside the valid range");
        }
      }
    }
  }
  return rec;
}

inline bool allowed_key(const std::string& key) {
  static const char* const keys[] = {"type",        "n_s",         "n_i",         "n_p",
                                     "lambda_s_nm", "lambda_i_nm", "lambda_p_nm", "sellmeier_s",
                                     "sellmeier_i", "sellmeier_p", "ir_s",        "ir_i",
                                     "ir_p",        "d_eff_pm_per_V", "lambda_min_nm", "lambda_max_nm"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

}  // namespace detail

inline std::vector<MaterialRecord> parse_material_db(std::istream& in, const std::string& origin = "<stream>") {
  std::vector<detail::PendingSection> sections;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t(trim(line));
    if (t.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) throw MaterialError(where + ": malformed section header");
      const std::string name(trim(std::string_view(t).substr(1, t.size() - 2)));
      if (name.empty()) throw MaterialError(where + ": empty material name");
      for (const auto& s : sections) {
        if (s.name == name) throw MaterialError(where + ": duplicate material '" + name + "'");
      }
      sections.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw MaterialError(where + ": expected 'key = value'");
    if (sections.empty()) throw MaterialError(where + ": key outside of a [material] section");
    const std::string key(trim(std::string_view(t).substr(0, eq)));
    const std::string value(trim(std::string_view(t).substr(eq + 1)));
    if (!detail::allowed_key(key)) throw MaterialError(where + ": unknown key '" + key + "'");
    auto& vals = sections.back().values;
    if (vals.count(key)) throw MaterialError(where + ": key '" + key + "' given twice");
    vals[key] = {value, line_no};
  }
  std::vector<MaterialRecord> out;
  out.reserve(sections.size());
  for (const auto& s : sections) out.push_back(detail::build_record(s, origin));
  return out;
}

inline std::vector<MaterialRecord> load_material_db(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MaterialError("cannot open material database '" + path + "'");
  return parse_material_db(in, path);
}

inline std::string serialize_material_db(const std::vector<MaterialRecord>& records) {
  using detail::format_double;
  std::ostringstream out;
  for (const auto& r : records) {
    out << '[' << r.name << "]\n";
    const std::array<Axis, 3> axes{Axis::signal, Axis::idler, Axis::pump};
    if (r.model == MaterialRecord::Model::fixed) {
      out << "type = fixed\n";
      for (Axis a : axes) out << "n_" << axis_suffix(a) << " = " << format_double(r.fixed_index[static_cast<int>(a)]) << '\n';
      for (Axis a : axes) {
        out << "lambda_" << axis_suffix(a) << "_nm = " << detail::format_scaled(r.pinned_wavelength[static_cast<int>(a)], 1e9)
            << '\n';
      }
    } else {
      out << "type = sellmeier\n";
      for (Axis a : axes) {
        const auto& s = r.sellmeier[static_cast<int>(a)];
        out << "sellmeier_" << axis_suffix(a) << " = " << format_double(s.a);
        for (const auto& [b, c] : s.terms) out << ' ' << format_double(b) << ' ' << format_double(c);
        out << '\n';
        if (s.ir != 0.0) out << "ir_" << axis_suffix(a) << " = " << format_double(s.ir) << '\n';
      }
    }
    out << "d_eff_pm_per_V = " << detail::format_scaled(r.d_eff, 1e12) << '\n';
    out << "lambda_min_nm = " << detail::format_scaled(r.lambda_min, 1e9) << '\n';
    out << "lambda_max_nm = " << detail::format_scaled(r.lambda_max, 1e9) << "\n\n";
  }
  return out.str();
}

/// Type-II PPKTP at 800 nm → 800 nm + 800 nm (pump 400 nm).
inline MaterialRecord builtin_ppktp_800() {
  MaterialRecord r;
  r.name = "PPKTP-800-typeII";
  r.model = MaterialRecord::Model::fixed;
  r.fixed_index = {1.844, 1.757, 1.964};
  r.pinned_wavelength = {800e-9, 800e-9, 400e-9};
  r.d_eff = 2.4e-12;
  r.lambda_min = 400e-9 - kPinnedWavelengthTolerance;
  r.lambda_max = 800e-9 + kPinnedWavelengthTolerance;
  return r;
}

inline std::vector<MaterialRecord> builtin_materials() { return {builtin_ppktp_800()}; }

inline const MaterialRecord& find_material(const std::vector<MaterialRecord>& db, const std::string& name) {
  for (const auto& r : db) {
    if (r.name == name) return r;
  }
  throw MaterialError("unknown material '" + name + "'");
}

}  // namespace spdc
