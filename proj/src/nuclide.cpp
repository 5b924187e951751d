#include "nuclib/nuclide.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "n",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

int level_rank(const LevelSpec& l) noexcept { return static_cast<int>(l.index()); }

// Superscript digits and the modifier letter small m, as they appear in
// typeset nuclide names, folded onto ASCII.
std::string fold_superscripts(std::string_view in) {
  static constexpr std::array<std::pair<std::string_view, char>, 11> kMap = {{
      {"⁰", '0'}, {"¹", '1'}, {"²", '2'}, {"³", '3'}, {"⁴", '4'},
      {"⁵", '5'}, {"⁶", '6'}, {"⁷", '7'}, {"⁸", '8'}, {"⁹", '9'},
      {"ᵐ", 'm'},
  }};
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    bool matched = false;
    for (const auto& [utf8, ascii] : kMap) {
      if (in.substr(i, utf8.size()) == utf8) {
        out.push_back(ascii);
        i += utf8.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(in[i++]);
  }
  return out;
}

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
  throw Error(Errc::malformed_id, "'" + std::string(text) + "': " + std::string(why));
}

int parse_mass(std::string_view digits, std::string_view text) {
  int a = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), a);
  if (ec == std::errc::result_out_of_range || (ec == std::errc() && (a < 1 || a > kMaxMassNumber)))
    throw Error(Errc::mass_out_of_range, "'" + std::string(text) + "'");
  if (ec != std::errc() || ptr != digits.data() + digits.size()) malformed(text, "bad mass number");
  return a;
}

// "m", "m2", ... ; empty means no isomer marker.
std::optional<int> parse_isomer_marker(std::string_view s, std::string_view text) {
  if (s.empty()) return std::nullopt;
  if (s.front() != 'm' && s.front() != 'M') malformed(text, "bad level suffix");
  s.remove_prefix(1);
  if (s.empty()) return 1;
  int k = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
  if (ec != std::errc() || ptr != s.data() + s.size() || k < 1) malformed(text, "bad isomer ordinal");
  return k;
}

LevelSpec parse_level_suffix(std::string_view s, std::string_view text) {
  if (s.empty()) malformed(text, "empty level after '@'");
  if (s == "g" || s == "G") return GroundLevel{};
  if (s.front() == 'm' || s.front() == 'M') return MetastableLevel{*parse_isomer_marker(s, text), {}};
  auto kev = text::parse_double(s);
  if (!kev || *kev < 0.0 || !std::isfinite(*kev)) malformed(text, "bad level energy");
  return EnergyLevel{*kev};
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

}  // namespace

std::optional<int> atomic_number(std::string_view symbol) noexcept {
  for (int z = 1; z <= kMaxAtomicNumber; ++z)
    if (iequals(kSymbols[z], symbol)) return z;
  return std::nullopt;
}

std::string_view element_symbol(int z) {
  if (z < 1 || z > kMaxAtomicNumber) throw Error(Errc::unknown_element, "Z=" + std::to_string(z));
  return kSymbols[z];
}

Nuclide::Nuclide(std::string_view element, int mass_number, LevelSpec level)
    : level_(std::move(level)) {
  auto z = atomic_number(element);
  if (!z) throw Error(Errc::unknown_element, "'" + std::string(element) + "'");
  if (mass_number < 1 || mass_number > kMaxMassNumber)
    throw Error(Errc::mass_out_of_range, std::to_string(mass_number));
  z_ = *z;
  a_ = mass_number;
}

Nuclide::Nuclide(int z, int mass_number, LevelSpec level) : level_(std::move(level)) {
  if (z < 1 || z > kMaxAtomicNumber) throw Error(Errc::unknown_element, "Z=" + std::to_string(z));
  if (mass_number < 1 || mass_number > kMaxMassNumber)
    throw Error(Errc::mass_out_of_range, std::to_string(mass_number));
  z_ = z;
  a_ = mass_number;
}

std::optional<double> Nuclide::level_kev() const noexcept {
  if (std::holds_alternative<GroundLevel>(level_)) return 0.0;
  if (const auto* m = std::get_if<MetastableLevel>(&level_)) return m->resolved_kev;
  return std::get<EnergyLevel>(level_).kev;
}

std::strong_ordering operator<=>(const Nuclide& a, const Nuclide& b) {
  if (auto c = a.z_ <=> b.z_; c != 0) return c;
  if (auto c = a.a_ <=> b.a_; c != 0) return c;
  if (auto c = level_rank(a.level_) <=> level_rank(b.level_); c != 0) return c;
  if (const auto* ma = std::get_if<MetastableLevel>(&a.level_))
    return ma->ordinal <=> std::get<MetastableLevel>(b.level_).ordinal;
  if (const auto* ea = std::get_if<EnergyLevel>(&a.level_)) {
    double x = ea->kev, y = std::get<EnergyLevel>(b.level_).kev;
    return x < y ? std::strong_ordering::less
                 : (y < x ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  return std::strong_ordering::equal;
}

std::size_t NuclideHash::operator()(const Nuclide& n) const noexcept {
  std::size_t h = static_cast<std::size_t>(n.z()) * 1000u + static_cast<std::size_t>(n.mass_number());
  h = h * 31u + n.level().index();
  if (const auto* m = std::get_if<MetastableLevel>(&n.level())) h = h * 31u + static_cast<std::size_t>(m->ordinal);
  if (const auto* e = std::get_if<EnergyLevel>(&n.level())) h ^= std::hash<double>{}(e->kev) + 0x9e3779b9u;
  return h;
}

Nuclide parse_nuclide_id(std::string_view raw) {
  std::string folded = fold_superscripts(text::trim(raw));
  std::string_view s = folded;
  if (s.empty()) malformed(raw, "empty identifier");

  LevelSpec level = GroundLevel{};
  bool explicit_level = false;
  if (auto at = s.find('@'); at != std::string_view::npos) {
    level = parse_level_suffix(s.substr(at + 1), raw);
    explicit_level = true;
    s = s.substr(0, at);
  }
  if (s.empty()) malformed(raw, "missing nuclide");

  std::string_view symbol, mass, marker;
  if (is_alpha(s.front())) {
    // Element first: "U-238", "u238", "Pa-234m", "Tc-99m2".
    std::size_t i = 0;
    while (i < s.size() && is_alpha(s[i])) ++i;
    symbol = s.substr(0, i);
    if (i < s.size() && s[i] == '-') ++i;
    std::size_t j = i;
    while (j < s.size() && is_digit(s[j])) ++j;
    mass = s.substr(i, j - i);
    marker = s.substr(j);
  } else if (is_digit(s.front())) {
    // Mass first: "238U", "234mPa", "225ac", "234m2Pa".
    std::size_t j = 0;
    while (j < s.size() && is_digit(s[j])) ++j;
    mass = s.substr(0, j);
    std::string_view rest = s.substr(j);
    if (!rest.empty() && rest.front() == '-') rest.remove_prefix(1);
    bool m_prefix = false;
    if (rest.size() >= 2 && (rest[0] == 'm' || rest[0] == 'M')) {
      std::size_t k = 1;
      while (k < rest.size() && is_digit(rest[k])) ++k;
      std::string_view after = rest.substr(k);
      // "mTc" or "m2Pa" reads as an isomer marker; "mo" stays molybdenum.
      if (!after.empty() && (k > 1 || (rest[0] == 'm' && is_upper(after[0])) ||
                             !atomic_number(rest).has_value()))
        m_prefix = atomic_number(after).has_value();
      if (m_prefix) {
        marker = rest.substr(0, k);
        symbol = after;
      }
    }
    if (!m_prefix) symbol = rest;
  } else {
    malformed(raw, "unexpected leading character");
  }

  if (symbol.empty() || mass.empty()) malformed(raw, "expected element symbol and mass number");
  for (char c : symbol)
    if (!is_alpha(c)) malformed(raw, "bad element symbol");
  if (symbol.size() > 3) throw Error(Errc::unknown_element, "'" + std::string(symbol) + "'");
  for (char c : mass)
    if (!is_digit(c)) malformed(raw, "bad mass number");

  if (auto ordinal = parse_isomer_marker(marker, raw)) {
    if (explicit_level) malformed(raw, "level given twice");
    level = MetastableLevel{*ordinal, {}};
  }
  auto z = atomic_number(symbol);
  if (!z) throw Error(Errc::unknown_element, "'" + std::string(symbol) + "'");
  return Nuclide(*z, parse_mass(mass, raw), level);
}

std::string format_nuclide_id(const Nuclide& n) {
  std::string out = std::to_string(n.mass_number());
  for (char c : n.element()) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (const auto* m = std::get_if<MetastableLevel>(&n.level())) {
    out += "@m";
    if (m->ordinal != 1) out += std::to_string(m->ordinal);
  } else if (const auto* e = std::get_if<EnergyLevel>(&n.level())) {
    out += "@" + text::format_double(e->kev);
  }
  return out;
}

std::string display_name(const Nuclide& n) {
  std::string out = std::string(n.element()) + "-" + std::to_string(n.mass_number());
  if (const auto* m = std::get_if<MetastableLevel>(&n.level())) {
    out += "m";
    if (m->ordinal != 1) out += std::to_string(m->ordinal);
  } else if (const auto* e = std::get_if<EnergyLevel>(&n.level())) {
    out += "[" + text::format_double(e->kev) + " keV]";
  }
  return out;
}

std::string_view radiation_code(RadiationType r) noexcept {
  switch (r) {
    case RadiationType::alpha: return "a";
    case RadiationType::beta_minus: return "bm";
    case RadiationType::beta_plus_ec: return "bp";
    case RadiationType::gamma: return "g";
    case RadiationType::electron: return "e";
    case RadiationType::xray: return "x";
  }
  return "?";
}

std::string_view radiation_name(RadiationType r) noexcept {
  switch (r) {
    case RadiationType::alpha: return "alpha";
    case RadiationType::beta_minus: return "beta_minus";
    case RadiationType::beta_plus_ec: return "beta_plus_ec";
    case RadiationType::gamma: return "gamma";
    case RadiationType::electron: return "electron";
    case RadiationType::xray: return "xray";
  }
  return "?";
}

std::optional<RadiationType> parse_radiation(std::string_view text) noexcept {
  for (auto r : kAllRadiationTypes)
    if (iequals(text, radiation_code(r)) || iequals(text, radiation_name(r))) return r;
  return std::nullopt;
}

std::string_view decay_mode_name(DecayMode m) noexcept {
  switch (m) {
    case DecayMode::alpha: return "A";
    case DecayMode::beta_minus: return "B-";
    case DecayMode::beta_plus_ec: return "EC+B+";
    case DecayMode::it: return "IT";
    case DecayMode::sf: return "SF";
  }
  return "?";
}

std::optional<DecayMode> parse_decay_mode(std::string_view text) noexcept {
  auto t = text::trim(text);
  if (iequals(t, "A") || iequals(t, "alpha")) return DecayMode::alpha;
  if (iequals(t, "B-") || iequals(t, "beta-")) return DecayMode::beta_minus;
  if (iequals(t, "B+") || iequals(t, "EC") || iequals(t, "EC+B+") || iequals(t, "B+EC") ||
      iequals(t, "ECB+"))
    return DecayMode::beta_plus_ec;
  if (iequals(t, "IT")) return DecayMode::it;
  if (iequals(t, "SF")) return DecayMode::sf;
  return std::nullopt;
}

double seconds_per(TimeUnit u) noexcept {
  constexpr double kYear = kDaysPerYear * 86400.0;
  switch (u) {
    case TimeUnit::as: return 1e-18;
    case TimeUnit::fs: return 1e-15;
    case TimeUnit::ps: return 1e-12;
    case TimeUnit::ns: return 1e-9;
    case TimeUnit::us: return 1e-6;
    case TimeUnit::ms: return 1e-3;
    case TimeUnit::s: return 1.0;
    case TimeUnit::m: return 60.0;
    case TimeUnit::h: return 3600.0;
    case TimeUnit::d: return 86400.0;
    case TimeUnit::y: return kYear;
    case TimeUnit::ky: return 1e3 * kYear;
    case TimeUnit::My: return 1e6 * kYear;
    case TimeUnit::Gy: return 1e9 * kYear;
  }
  return 1.0;
}

std::optional<TimeUnit> parse_time_unit(std::string_view text) noexcept {
  static constexpr std::array<std::pair<std::string_view, TimeUnit>, 14> kUnits = {{
      {"as", TimeUnit::as}, {"fs", TimeUnit::fs}, {"ps", TimeUnit::ps}, {"ns", TimeUnit::ns},
      {"us", TimeUnit::us}, {"ms", TimeUnit::ms}, {"s", TimeUnit::s},   {"m", TimeUnit::m},
      {"h", TimeUnit::h},   {"d", TimeUnit::d},   {"y", TimeUnit::y},   {"ky", TimeUnit::ky},
      {"My", TimeUnit::My}, {"Gy", TimeUnit::Gy},
  }};
  auto t = text::trim(text);
  if (t == "min") return TimeUnit::m;
  for (const auto& [name, unit] : kUnits)
    if (t == name) return unit;
  // Single-letter units are also seen upper-cased (e.g. "Y", "D").
  if (t.size() == 1)
    for (const auto& [name, unit] : kUnits)
      if (iequals(t, name)) return unit;
  return std::nullopt;
}

HalfLife HalfLife::from_seconds(double seconds, double uncertainty_seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds))
    throw std::invalid_argument("half-life must be positive and finite");
  if (!(uncertainty_seconds >= 0.0)) throw std::invalid_argument("half-life uncertainty must be >= 0");
  HalfLife h;
  h.seconds_ = seconds;
  h.uncertainty_ = uncertainty_seconds;
  return h;
}

HalfLife HalfLife::from_value(double value, TimeUnit unit, double uncertainty) {
  return from_seconds(value * seconds_per(unit), uncertainty * seconds_per(unit));
}

}  // namespace nuclib
