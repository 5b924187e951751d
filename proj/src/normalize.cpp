#include "nuclib/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

double MatchTolerance::window(const EnergyValue& a, const EnergyValue& b) const noexcept {
  const double combined = std::hypot(a.uncertainty_kev, b.uncertainty_kev);
  return std::max(sigmas * combined, floor_kev);
}

bool MatchTolerance::match(const EnergyValue& a, const EnergyValue& b) const noexcept {
  return std::abs(a.kev - b.kev) <= window(a, b);
}

bool LevelRecord::has_mode(DecayMode m) const noexcept {
  return std::any_of(decay_modes.begin(), decay_modes.end(), [m](const ModeBranch& b) { return b.mode == m; });
}

std::optional<std::size_t> LevelScheme::resolve(const EnergyValue& e, const MatchTolerance& tol) const {
  std::optional<std::size_t> best;
  double best_delta = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!tol.match(levels[i].energy, e)) continue;
    const double delta = std::abs(levels[i].energy.kev - e.kev);
    if (!best || delta < best_delta) {
      best = i;
      best_delta = delta;
    }
  }
  return best;
}

namespace {

// Column lookup by header name for one CSV table.
class Table {
 public:
  Table(const RawDataset& raw, std::initializer_list<std::string_view> required) : key_(raw.key) {
    rows_ = text::parse_csv(raw.body);
    if (rows_.empty()) throw Error(Errc::header_mismatch, raw.key.serialize() + ": no header row");
    const auto& header = rows_.front();
    for (std::size_t i = 0; i < header.size(); ++i) columns_.emplace(text::to_lower(text::trim(header[i])), i);
    for (auto name : required)
      if (!columns_.count(std::string(name)))
        throw Error(Errc::header_mismatch, raw.key.serialize() + ": missing column '" + std::string(name) + "'");
  }

  std::size_t size() const noexcept { return rows_.size() - 1; }

  // Trimmed cell text, empty when the column or cell is missing.
  std::string_view cell(std::size_t row, std::string_view column) const {
    auto it = columns_.find(std::string(column));
    if (it == columns_.end()) return {};
    const auto& r = rows_[row + 1];
    return it->second < r.size() ? text::trim(r[it->second]) : std::string_view{};
  }

  std::optional<double> number(std::size_t row, std::string_view column) const {
    return text::parse_double(cell(row, column));
  }

  std::optional<int> integer(std::size_t row, std::string_view column) const {
    auto v = number(row, column);
    if (!v || *v != std::floor(*v) || std::abs(*v) > 1e6) return std::nullopt;
    return static_cast<int>(*v);
  }

  std::string where(std::size_t row) const { return key_.serialize() + " row " + std::to_string(row + 1); }

 private:
  DatasetKey key_;
  std::vector<std::vector<std::string>> rows_;
  std::map<std::string, std::size_t> columns_;
};

std::optional<Nuclide> nuclide_from(const Table& t, std::size_t row, std::string_view zcol, std::string_view ncol) {
  auto z = t.integer(row, zcol);
  auto n = t.integer(row, ncol);
  if (!z || !n || *z < 1 || *z > kMaxAtomicNumber || *n < 0 || *z + *n > kMaxMassNumber) return std::nullopt;
  return Nuclide(*z, *z + *n);
}

EnergyValue energy_value(double kev, std::optional<double> unc) { return {kev, unc && *unc > 0 ? *unc : 0.0}; }

std::optional<EnergyValue> optional_level(const Table& t, std::size_t row, std::string_view column) {
  auto v = t.number(row, column);
  if (!v || *v < 0) return std::nullopt;
  return EnergyValue{*v, 0.0};
}

}  // namespace

DecayParse parse_decay_records(const RawDataset& raw) {
  if (raw.key.kind().category() != DatasetCategory::decay_rads)
    throw Error(Errc::header_mismatch, raw.key.serialize() + " is not a decay-radiation dataset");
  const Table t(raw, {"energy", "intensity", "p_z", "p_n", "p_energy", "decay", "d_z", "d_n"});
  const RadiationType radiation = raw.key.kind().radiation();

  DecayParse out;
  for (std::size_t r = 0; r < t.size(); ++r) {
    auto warn = [&](const std::string& why) { out.warnings.push_back(t.where(r) + ": " + why); };

    auto parent = nuclide_from(t, r, "p_z", "p_n");
    auto daughter = nuclide_from(t, r, "d_z", "d_n");
    if (!parent || !daughter) {
      warn("bad parent or daughter nuclide");
      continue;
    }
    if (*parent != raw.key.nuclide()) {
      warn("parent " + format_nuclide_id(*parent) + " does not belong to this dataset");
      continue;
    }
    auto mode = parse_decay_mode(t.cell(r, "decay"));
    if (!mode) {
      warn("unknown decay mode '" + std::string(t.cell(r, "decay")) + "'");
      continue;
    }
    auto p_level = t.number(r, "p_energy");
    if (!p_level || *p_level < 0) {
      warn("bad parent level energy");
      continue;
    }

    DecayRecord rec;
    rec.source = raw.key;
    rec.row = r + 1;
    rec.parent = *parent;
    rec.parent_level = energy_value(*p_level, t.number(r, "unc_pe"));
    if (auto hl = t.number(r, "p_half_life_sec"); hl && *hl > 0)
      rec.parent_half_life = HalfLife::from_seconds(*hl, std::max(0.0, t.number(r, "unc_hls").value_or(0.0)));
    rec.radiation = radiation;
    rec.daughter = *daughter;
    rec.decay_mode = *mode;
    rec.branching_percent = t.number(r, "decay_%").value_or(0.0);

    const auto energy_text = t.cell(r, "energy");
    if (!energy_text.empty()) {
      auto e = t.number(r, "energy");
      if (!e || *e < 0) {
        warn("unparseable energy '" + std::string(energy_text) + "'");
        continue;
      }
      auto unc = t.number(r, "unc_en");
      rec.energy = energy_value(*e, unc);
      rec.energy_uncertainty_reported = unc.has_value();
      auto inten = t.number(r, "intensity");
      if (!t.cell(r, "intensity").empty() && (!inten || *inten < 0)) {
        warn("unparseable intensity '" + std::string(t.cell(r, "intensity")) + "'");
        continue;
      }
      if (inten && *inten > 0) {
        rec.intensity = *inten;
        auto iu = t.number(r, "unc_i");
        rec.intensity_uncertainty = iu && *iu > 0 ? *iu : 0.0;
        rec.intensity_uncertainty_reported = iu.has_value();
      }
    } else if (auto ec = t.number(r, "intensity_ec"); ec && *ec > 0 && rec.is_particle()) {
      rec.intensity = *ec;
      rec.intensity_uncertainty = std::max(0.0, t.number(r, "unc_iec").value_or(0.0));
    } else {
      warn("missing energy");
      continue;
    }

    rec.start_level = optional_level(t, r, "start_level_energy");
    rec.end_level = optional_level(t, r, "end_level_energy");
    if (rec.is_particle())
      rec.daughter_feeding_level = rec.end_level.value_or(EnergyValue{});
    else
      rec.daughter_feeding_level = rec.start_level.value_or(EnergyValue{});
    out.records.push_back(std::move(rec));
  }
  return out;
}

SchemeParse parse_level_scheme(const RawDataset& levels, const std::optional<RawDataset>& transitions,
                               const MatchTolerance& tol) {
  if (levels.key.kind().category() != DatasetCategory::levels)
    throw Error(Errc::header_mismatch, levels.key.serialize() + " is not a level dataset");
  if (transitions) {
    if (transitions->key.kind().category() != DatasetCategory::transitions)
      throw Error(Errc::header_mismatch, transitions->key.serialize() + " is not a transition dataset");
    if (transitions->key.nuclide() != levels.key.nuclide())
      throw Error(Errc::nuclide_mismatch,
                  levels.key.serialize() + " and " + transitions->key.serialize() + " describe different nuclides");
  }

  SchemeParse out;
  LevelScheme& scheme = out.scheme;
  scheme.nuclide = levels.key.nuclide();

  const Table lv(levels, {"z", "n", "energy"});
  for (std::size_t r = 0; r < lv.size(); ++r) {
    auto warn = [&](const std::string& why) { out.warnings.push_back(lv.where(r) + ": " + why); };
    auto nuc = nuclide_from(lv, r, "z", "n");
    if (!nuc) {
      warn("bad nuclide");
      continue;
    }
    if (*nuc != scheme.nuclide)
      throw Error(Errc::nuclide_mismatch,
                  lv.where(r) + " lists " + format_nuclide_id(*nuc) + ", expected " + format_nuclide_id(scheme.nuclide));
    auto e = lv.number(r, "energy");
    if (!e || *e < 0) {
      warn("unparseable level energy '" + std::string(lv.cell(r, "energy")) + "'");
      continue;
    }
    LevelRecord rec;
    rec.nuclide = scheme.nuclide;
    rec.energy = energy_value(*e, lv.number(r, "unc_e"));
    if (auto jp = lv.cell(r, "jp"); !jp.empty()) rec.jpi = std::string(jp);
    if (text::to_lower(lv.cell(r, "half_life")) == "stable") {
      rec.half_life = HalfLife::stable();
    } else if (auto hl = lv.number(r, "half_life_sec"); hl && *hl > 0) {
      rec.half_life = HalfLife::from_seconds(*hl, std::max(0.0, lv.number(r, "unc_hls").value_or(0.0)));
    }
    for (int k = 1; k <= 3; ++k) {
      const std::string col = "decay_" + std::to_string(k);
      auto mode_text = lv.cell(r, col);
      if (mode_text.empty()) continue;
      auto mode = parse_decay_mode(mode_text);
      if (!mode) {
        warn("unknown decay mode '" + std::string(mode_text) + "'");
        continue;
      }
      rec.decay_modes.push_back({*mode, lv.number(r, col + "_%").value_or(0.0)});
    }
    scheme.levels.push_back(std::move(rec));
  }
  std::stable_sort(scheme.levels.begin(), scheme.levels.end(),
                   [](const LevelRecord& a, const LevelRecord& b) { return a.energy.kev < b.energy.kev; });
  if (!scheme.levels.empty() && scheme.levels.front().energy.kev != 0.0) {
    out.warnings.push_back(levels.key.serialize() + ": no ground state listed; assumed at 0 keV");
    LevelRecord ground;
    ground.nuclide = scheme.nuclide;
    scheme.levels.insert(scheme.levels.begin(), ground);
  }

  if (!transitions) return out;
  const Table tr(*transitions, {"z", "n", "start_level_energy", "end_level_energy", "energy"});
  for (std::size_t r = 0; r < tr.size(); ++r) {
    auto warn = [&](const std::string& why) { out.warnings.push_back(tr.where(r) + ": " + why); };
    auto nuc = nuclide_from(tr, r, "z", "n");
    if (!nuc) {
      warn("bad nuclide");
      continue;
    }
    if (*nuc != scheme.nuclide)
      throw Error(Errc::nuclide_mismatch,
                  tr.where(r) + " lists " + format_nuclide_id(*nuc) + ", expected " + format_nuclide_id(scheme.nuclide));
    auto start = tr.number(r, "start_level_energy");
    auto end = tr.number(r, "end_level_energy");
    auto eg = tr.number(r, "energy");
    if (!start || !end || !eg) {
      warn("unparseable transition");
      continue;
    }
    auto si = scheme.resolve({*start, tr.number(r, "unc_sle").value_or(0.0)}, tol);
    auto ei = scheme.resolve({*end, tr.number(r, "unc_ele").value_or(0.0)}, tol);
    if (!si || !ei) {
      warn("transition " + text::format_double(*start) + " -> " + text::format_double(*end) +
           " keV has no matching " + (!si ? "start" : "end") + " level");
      continue;
    }
    if (scheme.levels[*si].energy.kev <= scheme.levels[*ei].energy.kev) {
      warn("transition " + text::format_double(*start) + " -> " + text::format_double(*end) + " keV is not downward");
      continue;
    }
    TransitionRecord t;
    t.nuclide = scheme.nuclide;
    t.start_level = scheme.levels[*si].energy;
    t.end_level = scheme.levels[*ei].energy;
    t.gamma_energy = energy_value(*eg, tr.number(r, "unc_en"));
    if (auto ri = tr.number(r, "relative_intensity"); ri && *ri > 0) t.intensity = *ri;
    scheme.transitions.push_back(t);
  }
  return out;
}

namespace {

int mode_rank(DecayMode m) {
  switch (m) {
    case DecayMode::alpha: return 0;
    case DecayMode::beta_minus: return 1;
    case DecayMode::beta_plus_ec: return 2;
    case DecayMode::it: return 3;
    case DecayMode::sf: return 4;
  }
  return 5;
}

}  // namespace

std::vector<DaughterInfo> extract_daughters(std::span<const DecayRecord> records) {
  struct Tally {
    std::vector<EnergyValue> particle_fed;
    std::vector<EnergyValue> photon_fed;
    std::map<int, std::vector<std::pair<double, double>>> branch_by_mode;  // rank -> (parent level, %)
    int best_rank = 99;
  };
  std::map<Nuclide, Tally> tally;
  for (const auto& rec : records) {
    if (rec.decay_mode == DecayMode::sf) continue;
    if (rec.daughter == rec.parent.level_erased()) continue;
    auto& t = tally[rec.daughter.level_erased()];
    const int rank = mode_rank(rec.decay_mode);
    t.best_rank = std::min(t.best_rank, rank);
    (rec.is_particle() ? t.particle_fed : t.photon_fed).push_back(rec.daughter_feeding_level);
    t.branch_by_mode[rank].emplace_back(rec.parent_level.kev, rec.branching_percent);
  }

  auto dedup = [](std::vector<EnergyValue> v) {
    std::sort(v.begin(), v.end(), [](const EnergyValue& a, const EnergyValue& b) {
      return a.kev != b.kev ? a.kev < b.kev : a.uncertainty_kev < b.uncertainty_kev;
    });
    v.erase(std::unique(v.begin(), v.end(), [](const EnergyValue& a, const EnergyValue& b) { return a.kev == b.kev; }),
            v.end());
    return v;
  };

  std::vector<std::pair<int, DaughterInfo>> ranked;
  for (auto& [nuc, t] : tally) {
    DaughterInfo info;
    info.daughter = nuc;
    info.feeding_levels = dedup(t.particle_fed.empty() ? t.photon_fed : t.particle_fed);
    // Branching is read at the lowest parent level that reaches this
    // daughter, summed over the decay modes that do so.
    double lowest = INFINITY;
    for (auto& [rank, entries] : t.branch_by_mode)
      for (auto [level, pct] : entries) lowest = std::min(lowest, level);
    for (auto& [rank, entries] : t.branch_by_mode) {
      double pct_at_lowest = 0.0;
      for (auto [level, pct] : entries)
        if (level == lowest) pct_at_lowest = std::max(pct_at_lowest, pct);
      info.branching_percent += pct_at_lowest;
      for (const auto& rec : records)
        if (rec.daughter.level_erased() == nuc && mode_rank(rec.decay_mode) == rank) {
          info.modes.push_back(rec.decay_mode);
          break;
        }
    }
    ranked.emplace_back(t.best_rank, std::move(info));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<DaughterInfo> out;
  out.reserve(ranked.size());
  for (auto& [rank, info] : ranked) out.push_back(std::move(info));
  return out;
}

}  // namespace nuclib
