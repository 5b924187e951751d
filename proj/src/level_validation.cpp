#include "nuclib/level_validation.hpp"

#include <algorithm>
#include <set>

#include "nuclib/error.hpp"

namespace nuclib {

namespace {

void sort_descending(std::vector<EnergyValue>& v) {
  std::sort(v.begin(), v.end(), [](const EnergyValue& a, const EnergyValue& b) { return a.kev > b.kev; });
}

}  // namespace

CascadeResult cascade_visit(std::span<const EnergyValue> starts, const LevelScheme& scheme,
                            const MatchTolerance& tol) {
  CascadeResult out;
  std::vector<bool> seen(scheme.levels.size(), false);
  std::vector<std::size_t> work;
  for (const auto& s : starts) {
    auto idx = scheme.resolve(s, tol);
    if (!idx) {
      out.unresolved.push_back(s);
      continue;
    }
    if (!seen[*idx]) {
      seen[*idx] = true;
      work.push_back(*idx);
    }
  }

  // Transitions hold the energies of resolved level records, so exact
  // comparison finds the outgoing edges of a level.
  while (!work.empty()) {
    const std::size_t at = work.back();
    work.pop_back();
    const double from = scheme.levels[at].energy.kev;
    for (const auto& t : scheme.transitions) {
      if (t.start_level.kev != from) continue;
      auto to = scheme.resolve(t.end_level, tol);
      if (to && !seen[*to]) {
        seen[*to] = true;
        work.push_back(*to);
      }
    }
  }

  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.visited.push_back(scheme.levels[i].energy);
  sort_descending(out.visited);
  return out;
}

FlattenedLevels flatten_levels(const Nuclide& nuclide, std::span<const EnergyValue> inherited,
                               const LevelScheme& scheme, const ValidationConfig& cfg) {
  FlattenedLevels flat;
  flat.nuclide = nuclide;
  flat.inherited.assign(inherited.begin(), inherited.end());

  if (cfg.cascade) {
    auto result = cascade_visit(inherited, scheme, cfg.tolerance);
    flat.visited = std::move(result.visited);
    flat.orphans = std::move(result.unresolved);
  } else {
    std::set<std::size_t> fed;
    for (const auto& e : inherited) {
      if (auto idx = scheme.resolve(e, cfg.tolerance))
        fed.insert(*idx);
      else
        flat.orphans.push_back(e);
    }
    for (auto i : fed) flat.visited.push_back(scheme.levels[i].energy);
    sort_descending(flat.visited);
  }

  // Resolved inherited levels already appear in visited under the energy of
  // their level record; orphans are kept as given.
  flat.all = flat.visited;
  for (const auto& o : flat.orphans)
    if (std::none_of(flat.all.begin(), flat.all.end(), [&](const EnergyValue& e) { return e.kev == o.kev; }))
      flat.all.push_back(o);
  sort_descending(flat.all);
  return flat;
}

bool is_isomer_level(const LevelRecord& level, const ValidationConfig& cfg) {
  return level.energy.kev > 0.0 && level.half_life && !level.half_life->is_stable() &&
         level.half_life->seconds() >= cfg.isomer_threshold_s;
}

std::vector<LevelOutcome> infer_level_outcomes(const FlattenedLevels& flat, const LevelScheme& scheme,
                                               const ValidationConfig& cfg) {
  std::vector<bool> feasible(scheme.levels.size(), false);
  for (const auto& e : flat.all)
    if (auto idx = scheme.resolve(e, cfg.tolerance)) feasible[*idx] = true;

  std::vector<LevelOutcome> out;
  out.reserve(scheme.levels.size());
  int ordinal = 0;
  for (std::size_t i = 0; i < scheme.levels.size(); ++i) {
    LevelOutcome o;
    o.level = scheme.levels[i];
    o.feasible = feasible[i];
    if (o.feasible) o.modes = o.level.decay_modes;
    o.is_isomer = is_isomer_level(o.level, cfg);
    if (o.is_isomer) o.isomer_ordinal = ++ordinal;
    out.push_back(std::move(o));
  }
  return out;
}

std::optional<EnergyValue> resolve_isomer_ordinal(const LevelScheme& scheme, int ordinal, const ValidationConfig& cfg) {
  int k = 0;
  for (const auto& level : scheme.levels)
    if (is_isomer_level(level, cfg) && ++k == ordinal) return level.energy;
  return std::nullopt;
}

EnergyValue level_energy_for(const Nuclide& nuclide, const LevelScheme* scheme, const ValidationConfig& cfg) {
  if (nuclide.is_ground()) return {};
  if (const auto* m = std::get_if<MetastableLevel>(&nuclide.level())) {
    if (scheme)
      if (auto e = resolve_isomer_ordinal(*scheme, m->ordinal, cfg)) return *e;
    if (m->resolved_kev) return {*m->resolved_kev, 0.0};
    throw Error(Errc::unresolved_level, format_nuclide_id(nuclide) + ": the level data lists no isomer number " +
                                            std::to_string(m->ordinal));
  }
  const double kev = std::get<EnergyLevel>(nuclide.level()).kev;
  if (scheme)
    if (auto idx = scheme->resolve({kev, 0.0}, cfg.tolerance)) return scheme->levels[*idx].energy;
  return {kev, 0.0};
}

Nuclide canonical_at_level(const Nuclide& nuclide, const EnergyValue& level, const LevelScheme* scheme,
                           const ValidationConfig& cfg) {
  const Nuclide erased = nuclide.level_erased();
  std::optional<std::size_t> idx;
  if (scheme) idx = scheme->resolve(level, cfg.tolerance);
  if (idx) {
    const auto& rec = scheme->levels[*idx];
    if (rec.energy.kev == 0.0) return erased;
    if (is_isomer_level(rec, cfg)) {
      int k = 0;
      for (std::size_t i = 0; i <= *idx; ++i)
        if (is_isomer_level(scheme->levels[i], cfg)) ++k;
      return erased.with_level(MetastableLevel{k, rec.energy.kev});
    }
    return erased.with_level(EnergyLevel{rec.energy.kev});
  }
  if (level.kev == 0.0) return erased;
  return erased.with_level(EnergyLevel{level.kev});
}

Feasibility NuclideLevels::check(const EnergyValue& level, const MatchTolerance& tol) const {
  const LevelOutcome* o = outcome_at(level, tol);
  if (!o) return Feasibility::unvalidated;
  return o->feasible ? Feasibility::feasible : Feasibility::infeasible;
}

const LevelOutcome* NuclideLevels::outcome_at(const EnergyValue& level, const MatchTolerance& tol) const {
  if (!scheme) return nullptr;
  auto idx = scheme->resolve(level, tol);
  if (!idx || *idx >= outcomes.size()) return nullptr;
  return &outcomes[*idx];
}

NuclideLevels validate_nuclide(const Nuclide& nuclide, std::span<const EnergyValue> inherited,
                               std::shared_ptr<const LevelScheme> scheme, const ValidationConfig& cfg) {
  NuclideLevels out;
  out.nuclide = nuclide.level_erased();
  out.scheme = std::move(scheme);
  if (out.scheme) {
    out.flat = flatten_levels(out.nuclide, inherited, *out.scheme, cfg);
    out.outcomes = infer_level_outcomes(out.flat, *out.scheme, cfg);
  } else {
    out.flat.nuclide = out.nuclide;
    out.flat.inherited.assign(inherited.begin(), inherited.end());
    out.flat.orphans = out.flat.inherited;
    out.flat.all = out.flat.inherited;
    sort_descending(out.flat.all);
  }
  return out;
}

}  // namespace nuclib
