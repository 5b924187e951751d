#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nuclib/chain.hpp"

namespace nuclib {

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct PruneBounds {
  Interval energy_kev{0.0, std::numeric_limits<double>::infinity()};
  Interval intensity_percent{0.0, 100.0};
  std::optional<Interval> half_life_seconds;  // unbounded when empty

  // Throws Error(inverted_bounds) when lo > hi on any axis (or a bound is NaN).
  void validate() const;
  friend bool operator==(const PruneBounds&, const PruneBounds&) = default;
};

struct LibraryEntry {
  Nuclide nuclide;  // the emitter, at its emitting level
  RadiationType radiation = RadiationType::gamma;
  EnergyValue energy;
  std::optional<double> intensity_percent;
  double intensity_uncertainty = 0.0;
  // Of the emitting level. Library entries keep the value, not its uncertainty.
  std::optional<HalfLife> half_life;
  EnergyValue parent_level;  // energy only
  // The emitting or starting level could not be checked against level data.
  bool unvalidated = false;
  // Energy or intensity uncertainty (or the intensity itself) was not reported.
  bool no_uncertainty = false;

  // The decay-data row this entry came from. Not part of the entry's value.
  std::string source_key;
  std::size_t source_row = 0;

  friend bool operator==(const LibraryEntry& a, const LibraryEntry& b) {
    return a.nuclide == b.nuclide && a.radiation == b.radiation && a.energy == b.energy &&
           a.intensity_percent == b.intensity_percent && a.intensity_uncertainty == b.intensity_uncertainty &&
           a.half_life == b.half_life && a.parent_level == b.parent_level && a.unvalidated == b.unvalidated &&
           a.no_uncertainty == b.no_uncertainty;
  }
};

struct LibraryProvenance {
  std::string source_id;
  std::vector<DatasetProvenance> datasets;
};

struct RadionuclideLibrary {
  RadiationType radiation = RadiationType::gamma;
  // Emitter order of the subset, then descending intensity.
  std::vector<LibraryEntry> entries;
  std::optional<PruneBounds> bounds;  // empty until pruned
  LibraryProvenance provenance;
};

// Couples subset members to their decay data of one radiation type. A row is
// kept when its emitter (the parent at its level) is a member, the parent
// level is feasible, and, for de-excitation radiation, the daughter level it
// starts from is feasible. Rows whose levels have no level record are kept
// and flagged unvalidated. Throws Error(empty_subset | data_unavailable).
RadionuclideLibrary assemble_library(const RadionuclideSubset& subset, RadiationType radiation, NuclearData& data,
                                     const ValidationConfig& cfg = {});

// Closed intervals on every axis. An entry without an intensity survives only
// when the intensity lower bound is 0; likewise for an unknown half-life.
// Throws Error(inverted_bounds).
RadionuclideLibrary prune(const RadionuclideLibrary& lib, const PruneBounds& bounds);

// Distinct emitters in entry order.
std::vector<Nuclide> emitters(const RadionuclideLibrary& lib);

}  // namespace nuclib
