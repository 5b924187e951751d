#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace nuclib {

// Atomic number for a chemical symbol (case-insensitive), or nullopt.
std::optional<int> atomic_number(std::string_view symbol) noexcept;
// Canonical mixed-case symbol for Z in [1, 118].
std::string_view element_symbol(int z);
inline constexpr int kMaxAtomicNumber = 118;
inline constexpr int kMaxMassNumber = 300;

struct GroundLevel {
  friend bool operator==(const GroundLevel&, const GroundLevel&) = default;
};

// m, m2, m3, ... The keV energy is attached once the level dataset is known;
// it does not take part in equality.
struct MetastableLevel {
  int ordinal = 1;
  std::optional<double> resolved_kev;

  friend bool operator==(const MetastableLevel& a, const MetastableLevel& b) {
    return a.ordinal == b.ordinal;
  }
};

struct EnergyLevel {
  double kev = 0.0;
  friend bool operator==(const EnergyLevel&, const EnergyLevel&) = default;
};

using LevelSpec = std::variant<GroundLevel, MetastableLevel, EnergyLevel>;

class Nuclide {
 public:
  Nuclide() = default;
  // Throws Error(unknown_element | mass_out_of_range).
  Nuclide(std::string_view element, int mass_number, LevelSpec level = GroundLevel{});
  Nuclide(int z, int mass_number, LevelSpec level = GroundLevel{});

  int z() const noexcept { return z_; }
  std::string_view element() const { return element_symbol(z_); }
  int mass_number() const noexcept { return a_; }
  const LevelSpec& level() const noexcept { return level_; }

  bool is_ground() const noexcept { return std::holds_alternative<GroundLevel>(level_); }
  // Level energy in keV if known: 0 for ground, the explicit or resolved value otherwise.
  std::optional<double> level_kev() const noexcept;

  Nuclide level_erased() const { return Nuclide(z_, a_); }
  Nuclide with_level(LevelSpec level) const { return Nuclide(z_, a_, std::move(level)); }

  friend bool operator==(const Nuclide&, const Nuclide&) = default;
  friend std::strong_ordering operator<=>(const Nuclide& a, const Nuclide& b);

 private:
  int z_ = 1;
  int a_ = 1;
  LevelSpec level_ = GroundLevel{};
};

// Accepts "U-238", "238U", "u238", "Pa-234m", "234mPa", "Tc-99m", "Ac-225@m2",
// "177lu@970.1757" and superscript forms such as "²³⁴ᵐPa".
// Throws Error(malformed_id | unknown_element | mass_out_of_range).
Nuclide parse_nuclide_id(std::string_view text);

// Lowercase "<A><element>[@m<k>|@<keV>]", e.g. "225ac", "234pa@m", "177lu@m4".
std::string format_nuclide_id(const Nuclide& n);

// Human-facing label, e.g. "Pa-234m", "Lu-177m4", "Tc-99[142.68 keV]".
std::string display_name(const Nuclide& n);

struct NuclideHash {
  std::size_t operator()(const Nuclide& n) const noexcept;
};

enum class RadiationType : std::uint8_t { alpha, beta_minus, beta_plus_ec, gamma, electron, xray };

inline constexpr std::array<RadiationType, 6> kAllRadiationTypes = {
    RadiationType::alpha, RadiationType::beta_minus, RadiationType::beta_plus_ec,
    RadiationType::gamma, RadiationType::electron,   RadiationType::xray};

// Short query code: a, bm, bp, g, e, x.
std::string_view radiation_code(RadiationType r) noexcept;
// Long name: alpha, beta_minus, beta_plus_ec, gamma, electron, xray.
std::string_view radiation_name(RadiationType r) noexcept;
// Accepts either form (case-insensitive).
std::optional<RadiationType> parse_radiation(std::string_view text) noexcept;

enum class DecayMode : std::uint8_t { alpha, beta_minus, beta_plus_ec, it, sf };

std::string_view decay_mode_name(DecayMode m) noexcept;
// Accepts data-source spellings: A, B-, B+, EC, EC+B+, IT, SF (case-insensitive).
std::optional<DecayMode> parse_decay_mode(std::string_view text) noexcept;

enum class TimeUnit : std::uint8_t { as, fs, ps, ns, us, ms, s, m, h, d, y, ky, My, Gy };

inline constexpr double kDaysPerYear = 365.2422;
double seconds_per(TimeUnit u) noexcept;
std::optional<TimeUnit> parse_time_unit(std::string_view text) noexcept;

class HalfLife {
 public:
  static HalfLife stable() noexcept { return HalfLife(); }
  // Throws std::invalid_argument when seconds <= 0 or uncertainty < 0.
  static HalfLife from_seconds(double seconds, double uncertainty_seconds = 0.0);
  static HalfLife from_value(double value, TimeUnit unit, double uncertainty = 0.0);

  bool is_stable() const noexcept { return !seconds_.has_value(); }
  // Precondition: !is_stable().
  double seconds() const { return *seconds_; }
  double uncertainty_seconds() const noexcept { return uncertainty_; }
  double in(TimeUnit unit) const { return seconds() / seconds_per(unit); }

  friend bool operator==(const HalfLife&, const HalfLife&) = default;

 private:
  HalfLife() = default;
  std::optional<double> seconds_;
  double uncertainty_ = 0.0;
};

struct EnergyValue {
  double kev = 0.0;
  double uncertainty_kev = 0.0;

  friend bool operator==(const EnergyValue&, const EnergyValue&) = default;
};

}  // namespace nuclib
