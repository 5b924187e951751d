#include "nuclib/library.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nuclib/error.hpp"

namespace nuclib {

void PruneBounds::validate() const {
  auto check = [](const Interval& i, const char* axis) {
    if (std::isnan(i.lo) || std::isnan(i.hi) || i.lo > i.hi)
      throw Error(Errc::inverted_bounds, std::string(axis) + " lower bound exceeds upper bound");
  };
  check(energy_kev, "energy");
  check(intensity_percent, "intensity");
  if (half_life_seconds) check(*half_life_seconds, "half-life");
}

RadionuclideLibrary assemble_library(const RadionuclideSubset& subset, RadiationType radiation, NuclearData& data,
                                     const ValidationConfig& cfg) {
  if (subset.members.empty()) throw Error(Errc::empty_subset, "the radionuclide subset has no members");

  RadionuclideLibrary lib;
  lib.radiation = radiation;

  std::vector<Nuclide> parents;
  for (const auto& m : subset.members) {
    const Nuclide e = m.level_erased();
    if (std::find(parents.begin(), parents.end(), e) == parents.end()) parents.push_back(e);
  }

  auto levels_of = [&](const Nuclide& n) -> const NuclideLevels* {
    auto it = subset.levels.find(n.level_erased());
    return it == subset.levels.end() ? nullptr : &it->second;
  };

  std::vector<std::pair<std::size_t, LibraryEntry>> ranked;
  for (const auto& parent : parents) {
    const NuclideLevels* pl = levels_of(parent);
    for (const auto& rec : data.decay_records(parent, radiation)) {
      if (!rec.emits()) continue;
      const Nuclide emitter =
          canonical_at_level(parent, rec.parent_level, pl ? pl->scheme.get() : nullptr, cfg);
      auto member = std::find(subset.members.begin(), subset.members.end(), emitter);
      if (member == subset.members.end()) continue;

      bool unvalidated = false;
      const Feasibility at_parent = pl ? pl->check(rec.parent_level, cfg.tolerance) : Feasibility::unvalidated;
      if (at_parent == Feasibility::infeasible) continue;
      unvalidated |= at_parent == Feasibility::unvalidated;
      if (rec.start_level && !rec.is_particle()) {
        const NuclideLevels* dl = levels_of(rec.daughter);
        const Feasibility at_start = dl ? dl->check(*rec.start_level, cfg.tolerance) : Feasibility::unvalidated;
        if (at_start == Feasibility::infeasible) continue;
        unvalidated |= at_start == Feasibility::unvalidated;
      }

      LibraryEntry e;
      e.nuclide = emitter;
      e.radiation = radiation;
      e.energy = *rec.energy;
      e.intensity_percent = rec.intensity;
      e.intensity_uncertainty = rec.intensity_uncertainty;
      if (rec.parent_half_life && !rec.parent_half_life->is_stable())
        e.half_life = HalfLife::from_seconds(rec.parent_half_life->seconds());
      e.parent_level = {rec.parent_level.kev, 0.0};
      e.unvalidated = unvalidated;
      e.no_uncertainty =
          !rec.intensity || !rec.energy_uncertainty_reported || !rec.intensity_uncertainty_reported;
      e.source_key = rec.source.serialize();
      e.source_row = rec.row;
      ranked.emplace_back(static_cast<std::size_t>(member - subset.members.begin()), std::move(e));
    }
  }

  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    const double ia = a.second.intensity_percent.value_or(-1.0);
    const double ib = b.second.intensity_percent.value_or(-1.0);
    if (ia != ib) return ia > ib;
    return a.second.energy.kev < b.second.energy.kev;
  });
  lib.entries.reserve(ranked.size());
  for (auto& [idx, e] : ranked) lib.entries.push_back(std::move(e));

  std::set<std::string> used;
  for (const auto& p : parents) {
    used.insert(DatasetKey(p, DatasetKind::decay(radiation)).serialize());
    used.insert(DatasetKey(p, DatasetKind::levels()).serialize());
    used.insert(DatasetKey(p, DatasetKind::transitions()).serialize());
  }
  lib.provenance.source_id = data.access().source_id();
  for (auto& p : data.provenance())
    if (used.count(p.key)) lib.provenance.datasets.push_back(std::move(p));
  return lib;
}

RadionuclideLibrary prune(const RadionuclideLibrary& lib, const PruneBounds& bounds) {
  bounds.validate();
  RadionuclideLibrary out;
  out.radiation = lib.radiation;
  out.provenance = lib.provenance;

  PruneBounds declared = bounds;
  if (lib.bounds) {
    auto meet = [](const Interval& a, const Interval& b) { return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; };
    declared.energy_kev = meet(lib.bounds->energy_kev, bounds.energy_kev);
    declared.intensity_percent = meet(lib.bounds->intensity_percent, bounds.intensity_percent);
    if (lib.bounds->half_life_seconds && bounds.half_life_seconds)
      declared.half_life_seconds = meet(*lib.bounds->half_life_seconds, *bounds.half_life_seconds);
    else if (lib.bounds->half_life_seconds)
      declared.half_life_seconds = lib.bounds->half_life_seconds;
  }
  out.bounds = declared;

  for (const auto& e : lib.entries) {
    if (!bounds.energy_kev.contains(e.energy.kev)) continue;
    if (e.intensity_percent ? !bounds.intensity_percent.contains(*e.intensity_percent)
                            : bounds.intensity_percent.lo > 0.0)
      continue;
    if (bounds.half_life_seconds) {
      const auto& hl = *bounds.half_life_seconds;
      const bool known = e.half_life && !e.half_life->is_stable();
      if (known ? !hl.contains(e.half_life->seconds()) : hl.lo > 0.0) continue;
    }
    out.entries.push_back(e);
  }
  return out;
}

std::vector<Nuclide> emitters(const RadionuclideLibrary& lib) {
  std::vector<Nuclide> out;
  for (const auto& e : lib.entries)
    if (std::find(out.begin(), out.end(), e.nuclide) == out.end()) out.push_back(e.nuclide);
  return out;
}

}  // namespace nuclib
