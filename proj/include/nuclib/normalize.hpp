#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nuclib/data_access.hpp"
#include "nuclib/records.hpp"

namespace nuclib {

struct DecayParse {
  std::vector<DecayRecord> records;  // file order
  std::vector<std::string> warnings;
};

// Throws Error(header_mismatch) when a required column is missing.
// Rows whose mandatory fields do not parse are skipped with a warning.
DecayParse parse_decay_records(const RawDataset& raw);

struct SchemeParse {
  LevelScheme scheme;
  std::vector<std::string> warnings;
};

// Transitions are optional: a nuclide may have levels but no gamma table.
// Transitions whose end points resolve to no level, or that do not go
// downward, are dropped with a warning.
// Throws Error(header_mismatch | nuclide_mismatch).
SchemeParse parse_level_scheme(const RawDataset& levels, const std::optional<RawDataset>& transitions,
                               const MatchTolerance& tol = {});

struct DaughterInfo {
  Nuclide daughter;                         // level-erased
  std::vector<EnergyValue> feeding_levels;  // ascending, duplicate-free
  double branching_percent = 0.0;
  std::vector<DecayMode> modes;
};

// Daughters of one parent, duplicate-free. Spontaneous fission and
// isomeric transitions back to the parent contribute nothing. The result
// does not depend on record order: daughters are ranked by decay mode
// (alpha, beta-, beta+/EC, IT), then by Z and A.
std::vector<DaughterInfo> extract_daughters(std::span<const DecayRecord> records);

}  // namespace nuclib
