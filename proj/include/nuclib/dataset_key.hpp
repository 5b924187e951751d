#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "nuclib/nuclide.hpp"

namespace nuclib {

enum class DatasetCategory : std::uint8_t { decay_rads, levels, transitions };

// What is being asked of the data source for one nuclide: one decay-radiation
// table per radiation type, or one of the two structural tables.
class DatasetKind {
 public:
  static DatasetKind decay(RadiationType r) noexcept { return DatasetKind(DatasetCategory::decay_rads, r); }
  static DatasetKind levels() noexcept { return DatasetKind(DatasetCategory::levels, RadiationType::alpha); }
  static DatasetKind transitions() noexcept {
    return DatasetKind(DatasetCategory::transitions, RadiationType::alpha);
  }

  DatasetCategory category() const noexcept { return category_; }
  // Meaningful only for decay_rads.
  RadiationType radiation() const noexcept { return radiation_; }

  // dr-a, dr-bm, dr-bp, dr-g, dr-e, dr-x, lv, tr
  std::string code() const;
  static std::optional<DatasetKind> from_code(std::string_view code) noexcept;

  friend bool operator==(const DatasetKind&, const DatasetKind&) = default;
  friend auto operator<=>(const DatasetKind&, const DatasetKind&) = default;

 private:
  DatasetKind(DatasetCategory c, RadiationType r) noexcept : category_(c), radiation_(r) {}
  DatasetCategory category_;
  RadiationType radiation_;
};

class DatasetKey {
 public:
  // The nuclide is stored level-erased: the data source merges isomers into
  // their nuclide.
  DatasetKey(const Nuclide& n, DatasetKind kind) : nuclide_(n.level_erased()), kind_(kind) {}

  const Nuclide& nuclide() const noexcept { return nuclide_; }
  DatasetKind kind() const noexcept { return kind_; }

  // "<A><element>:<kindcode>", e.g. "225ac:dr-a".
  std::string serialize() const;
  // Throws Error(malformed_id) on a bad string.
  static DatasetKey parse(std::string_view text);
  // Portable file stem: the colon becomes an underscore ("225ac_dr-a").
  std::string file_stem() const;

  friend bool operator==(const DatasetKey&, const DatasetKey&) = default;
  friend auto operator<=>(const DatasetKey& a, const DatasetKey& b) {
    if (auto c = a.nuclide_ <=> b.nuclide_; c != 0) return c;
    return a.kind_ <=> b.kind_;
  }

 private:
  Nuclide nuclide_;
  DatasetKind kind_;
};

}  // namespace nuclib
