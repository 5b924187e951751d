#pragma once

#include <array>
#include <string>
#include <string_view>

#include "nuclib/library.hpp"

namespace nuclib::detail {

inline constexpr std::array<std::string_view, 9> kTableColumns = {
    "nuclide",       "radiation",         "energy_kev",       "energy_unc_kev", "intensity_pct",
    "intensity_unc_pct", "half_life_s", "parent_level_kev", "flags"};

// Entry values as strings in column order; blanks for missing values.
std::array<std::string, 9> entry_fields(const LibraryEntry& e);

}  // namespace nuclib::detail
