#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nuclib/records.hpp"

namespace nuclib {

struct ValidationConfig {
  MatchTolerance tolerance;
  // A level with energy > 0 and a reported half-life at or above this is an isomer.
  double isomer_threshold_s = 1e-9;
  // Disabling the cascade keeps only the levels fed directly by the parent.
  bool cascade = true;
};

struct CascadeResult {
  std::vector<EnergyValue> visited;     // level energies, descending, duplicate-free
  std::vector<EnergyValue> unresolved;  // start levels that match no level record
};

// Every level reachable from a start level through zero or more downward
// transitions. Unresolved start levels are reported rather than thrown.
CascadeResult cascade_visit(std::span<const EnergyValue> starts, const LevelScheme& scheme,
                            const MatchTolerance& tol = {});

struct FlattenedLevels {
  Nuclide nuclide;
  std::vector<EnergyValue> inherited;  // as given by the parent (or the user)
  std::vector<EnergyValue> visited;    // reached by the cascade, descending
  std::vector<EnergyValue> all;        // union, descending
  std::vector<EnergyValue> orphans;    // inherited levels with no level record
};

FlattenedLevels flatten_levels(const Nuclide& nuclide, std::span<const EnergyValue> inherited,
                               const LevelScheme& scheme, const ValidationConfig& cfg = {});

struct LevelOutcome {
  LevelRecord level;
  bool feasible = false;
  std::vector<ModeBranch> modes;
  bool is_isomer = false;
  std::optional<int> isomer_ordinal;  // 1 for m, 2 for m2, ...
};

// One outcome per level of the scheme, in the scheme's order.
std::vector<LevelOutcome> infer_level_outcomes(const FlattenedLevels& flat, const LevelScheme& scheme,
                                               const ValidationConfig& cfg = {});

bool is_isomer_level(const LevelRecord& level, const ValidationConfig& cfg = {});

// Energy of the k-th isomer in ascending energy order, if there is one.
std::optional<EnergyValue> resolve_isomer_ordinal(const LevelScheme& scheme, int ordinal,
                                                  const ValidationConfig& cfg = {});

// Energy a user-specified level refers to: 0 keV for ground, the k-th isomer
// for m<k>, the matching level for an explicit energy. Throws
// Error(unresolved_level) for an ordinal the scheme does not have.
EnergyValue level_energy_for(const Nuclide& nuclide, const LevelScheme* scheme, const ValidationConfig& cfg = {});

// Canonical identity of nuclide at a level: ground, metastable ordinal when
// the level is an isomer, explicit energy otherwise.
Nuclide canonical_at_level(const Nuclide& nuclide, const EnergyValue& level, const LevelScheme* scheme,
                           const ValidationConfig& cfg = {});

enum class Feasibility { feasible, infeasible, unvalidated };

// Validation state of one nuclide within a radionuclide subset.
struct NuclideLevels {
  Nuclide nuclide;  // level-erased
  std::shared_ptr<const LevelScheme> scheme;  // null when no level data exists
  FlattenedLevels flat;
  std::vector<LevelOutcome> outcomes;

  // Unvalidated: the level has no record (or there is no scheme at all).
  Feasibility check(const EnergyValue& level, const MatchTolerance& tol = {}) const;
  const LevelOutcome* outcome_at(const EnergyValue& level, const MatchTolerance& tol = {}) const;
};

NuclideLevels validate_nuclide(const Nuclide& nuclide, std::span<const EnergyValue> inherited,
                               std::shared_ptr<const LevelScheme> scheme, const ValidationConfig& cfg = {});

}  // namespace nuclib
