#include "nuclib/nuclear_data.hpp"

#include <algorithm>
#include <filesystem>

#include "nuclib/error.hpp"

namespace nuclib {

namespace {

std::chrono::system_clock::time_point file_time(const std::filesystem::path& p) {
  std::error_code ec;
  auto t = std::filesystem::last_write_time(p, ec);
  if (ec) return std::chrono::system_clock::now();
  return std::chrono::time_point_cast<std::chrono::system_clock::duration>(
      t - std::filesystem::file_time_type::clock::now() + std::chrono::system_clock::now());
}

}  // namespace

NuclearData::NuclearData(DataAccess& access, MatchTolerance tolerance) : access_(access), tolerance_(tolerance) {}

std::vector<std::optional<RawDataset>> NuclearData::fetch(std::span<const DatasetKey> keys) {
  try {
    auto results = access_.fetch_all(keys);
    for (const auto& r : results)
      if (r) note(*r);
    return results;
  } catch (const Error& e) {
    if (e.code() == Errc::network_error || e.code() == Errc::offline_miss)
      throw Error(Errc::data_unavailable, e.what());
    throw;
  }
}

void NuclearData::note(const RawDataset& raw) {
  DatasetProvenance p{raw.key.serialize(), raw.origin, file_time(access_.cache_path(raw.key))};
  std::lock_guard lock(mutex_);
  provenance_.try_emplace(p.key, std::move(p));
}

void NuclearData::add_warnings(const std::vector<std::string>& w) {
  if (w.empty()) return;
  std::lock_guard lock(mutex_);
  warnings_.insert(warnings_.end(), w.begin(), w.end());
}

void NuclearData::prefetch(std::span<const Nuclide> nuclides, bool with_levels) {
  std::vector<Nuclide> need_decay;
  std::vector<Nuclide> need_levels;
  {
    std::lock_guard lock(mutex_);
    for (const auto& n : nuclides) {
      const Nuclide e = n.level_erased();
      if (!decay_.count(e) && std::find(need_decay.begin(), need_decay.end(), e) == need_decay.end())
        need_decay.push_back(e);
      if (with_levels && !levels_known_.count(e) &&
          std::find(need_levels.begin(), need_levels.end(), e) == need_levels.end())
        need_levels.push_back(e);
    }
  }
  std::vector<DatasetKey> keys;
  for (const auto& n : need_decay)
    for (auto r : kAllRadiationTypes) keys.emplace_back(n, DatasetKind::decay(r));
  for (const auto& n : need_levels) {
    keys.emplace_back(n, DatasetKind::levels());
    keys.emplace_back(n, DatasetKind::transitions());
  }
  if (keys.empty()) return;
  auto raws = fetch(keys);
  std::size_t at = 0;
  for (const auto& n : need_decay) {
    std::span<const std::optional<RawDataset>> mine(raws.data() + at, kAllRadiationTypes.size());
    store_decay(n, mine);
    at += kAllRadiationTypes.size();
  }
  for (const auto& n : need_levels) {
    store_levels(n, raws[at], raws[at + 1]);
    at += 2;
  }
}

std::shared_ptr<const std::vector<DecayRecord>> NuclearData::store_decay(
    const Nuclide& erased, std::span<const std::optional<RawDataset>> raws) {
  auto records = std::make_shared<std::vector<DecayRecord>>();
  for (const auto& raw : raws) {
    if (!raw) continue;
    auto parsed = parse_decay_records(*raw);
    add_warnings(parsed.warnings);
    records->insert(records->end(), std::make_move_iterator(parsed.records.begin()),
                    std::make_move_iterator(parsed.records.end()));
  }
  std::lock_guard lock(mutex_);
  return decay_.try_emplace(erased, std::move(records)).first->second;
}

std::shared_ptr<const LevelScheme> NuclearData::store_levels(const Nuclide& erased,
                                                             const std::optional<RawDataset>& levels,
                                                             const std::optional<RawDataset>& transitions) {
  std::shared_ptr<const LevelScheme> scheme;
  if (levels) {
    auto parsed = parse_level_scheme(*levels, transitions, tolerance_);
    add_warnings(parsed.warnings);
    scheme = std::make_shared<const LevelScheme>(std::move(parsed.scheme));
  }
  std::lock_guard lock(mutex_);
  if (!levels_known_.count(erased)) {
    levels_known_[erased] = true;
    levels_[erased] = scheme;
  }
  return levels_[erased];
}

std::shared_ptr<const std::vector<DecayRecord>> NuclearData::decay_records(const Nuclide& nuclide) {
  const Nuclide erased = nuclide.level_erased();
  {
    std::lock_guard lock(mutex_);
    if (auto it = decay_.find(erased); it != decay_.end()) return it->second;
  }
  std::vector<DatasetKey> keys;
  for (auto r : kAllRadiationTypes) keys.emplace_back(erased, DatasetKind::decay(r));
  return store_decay(erased, fetch(keys));
}

std::vector<DecayRecord> NuclearData::decay_records(const Nuclide& nuclide, RadiationType radiation) {
  std::vector<DecayRecord> out;
  for (const auto& r : *decay_records(nuclide))
    if (r.radiation == radiation) out.push_back(r);
  return out;
}

std::shared_ptr<const LevelScheme> NuclearData::level_scheme(const Nuclide& nuclide) {
  const Nuclide erased = nuclide.level_erased();
  {
    std::lock_guard lock(mutex_);
    if (levels_known_.count(erased)) return levels_[erased];
  }
  const DatasetKey keys[] = {DatasetKey(erased, DatasetKind::levels()), DatasetKey(erased, DatasetKind::transitions())};
  auto raws = fetch(keys);
  return store_levels(erased, raws[0], raws[1]);
}

std::vector<std::string> NuclearData::warnings() const {
  std::lock_guard lock(mutex_);
  return warnings_;
}

std::vector<DatasetProvenance> NuclearData::provenance() const {
  std::lock_guard lock(mutex_);
  std::vector<DatasetProvenance> out;
  for (const auto& [k, p] : provenance_) out.push_back(p);
  return out;
}

}  // namespace nuclib
