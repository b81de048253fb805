#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spdc {

namespace constants {
inline constexpr double c = 299792458.0;          // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

class UnitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lab units accepted on input. Everything inside the library is SI.
///
/// Frequencies given in Hz/kHz/MHz/GHz are *ordinary* frequencies and are
/// returned as angular frequencies (rad/s); `rad/s` passes through.
enum class Unit { m, cm, mm, um, nm, m_per_V, pm_per_V, W, mW, uW, rad_per_s, Hz, kHz, MHz, GHz, one };

namespace detail {
struct UnitInfo {
  Unit unit;
  std::string_view tag;
  double factor;
  double divisor = 1.0;  // SI = value * factor / divisor, exact for decimal prefixes
};

inline constexpr UnitInfo kUnits[] = {
    {Unit::m, "m", 1.0},
    {Unit::cm, "cm", 1.0, 1e2},
    {Unit::mm, "mm", 1.0, 1e3},
    {Unit::um, "um", 1.0, 1e6},
    {Unit::um, "\xC2\xB5m", 1.0, 1e6},  // µm
    {Unit::nm, "nm", 1.0, 1e9},
    {Unit::m_per_V, "m/V", 1.0},
    {Unit::pm_per_V, "pm/V", 1.0, 1e12},
    {Unit::W, "W", 1.0},
    {Unit::mW, "mW", 1.0, 1e3},
    {Unit::uW, "uW", 1.0, 1e6},
    {Unit::rad_per_s, "rad/s", 1.0},
    {Unit::Hz, "Hz", 2.0 * constants::pi},
    {Unit::kHz, "kHz", 2.0 * constants::pi * 1e3},
    {Unit::MHz, "MHz", 2.0 * constants::pi * 1e6},
    {Unit::GHz, "GHz", 2.0 * constants::pi * 1e9},
    {Unit::one, "", 1.0},
};

inline const UnitInfo& lookup(std::string_view tag) {
  for (const auto& u : kUnits) {
    if (u.tag == tag) return u;
  }
  throw UnitError("unknown unit '" + std::string(tag) + "'");
}

inline const UnitInfo& lookup(Unit unit) {
  for (const auto& u : kUnits) {
    if (u.unit == unit) return u;
  }
  throw UnitError("unknown unit");
}
}  // namespace detail

inline Unit parse_unit(std::string_view tag) { return detail::lookup(tag).unit; }

inline std::string_view unit_tag(Unit unit) { return detail::lookup(unit).tag; }

namespace detail {
inline double to_si(double value, const UnitInfo& u) { return value * u.factor / u.divisor; }
inline double from_si(double value_si, const UnitInfo& u) { return value_si * u.divisor / u.factor; }
}  // namespace detail

inline double to_si(double value, Unit unit) { return detail::to_si(value, detail::lookup(unit)); }
inline double to_si(double value, std::string_view tag) { return detail::to_si(value, detail::lookup(tag)); }

inline double from_si(double value_si, Unit unit) { return detail::from_si(value_si, detail::lookup(unit)); }
inline double from_si(double value_si, std::string_view tag) {
  return detail::from_si(value_si, detail::lookup(tag));
}

/// A number with its unit tag, e.g. "800 nm" or "2.4pm/V".
struct Quantity {
  double value = 0.0;
  std::string unit;

  double si() const { return to_si(value, unit); }
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Parses "<number> <unit>"; whitespace between the two is optional.
inline Quantity parse_quantity(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || !std::isfinite(value)) {
    throw UnitError("expected a number in '" + std::string(text) + "'");
  }
  std::string_view tag = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  detail::lookup(tag);  // validates
  return Quantity{value, std::string(tag)};
}

}  // namespace spdc
