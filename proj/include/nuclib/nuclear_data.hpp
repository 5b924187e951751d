#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "nuclib/data_access.hpp"
#include "nuclib/normalize.hpp"

namespace nuclib {

// Where one dataset came from, for library provenance.
struct DatasetProvenance {
  std::string key;
  DatasetOrigin origin = DatasetOrigin::cache;
  std::chrono::system_clock::time_point retrieved;  // cache file write time
};

// Parsed, memoized view of the datasets behind a DataAccess. Thread-safe.
// Transport failures and offline misses surface as Error(data_unavailable).
class NuclearData {
 public:
  explicit NuclearData(DataAccess& access, MatchTolerance tolerance = {});

  // Records of one nuclide over all six radiation types, in type order.
  std::shared_ptr<const std::vector<DecayRecord>> decay_records(const Nuclide& nuclide);
  std::vector<DecayRecord> decay_records(const Nuclide& nuclide, RadiationType radiation);

  // Null when the data source has no level dataset for the nuclide.
  std::shared_ptr<const LevelScheme> level_scheme(const Nuclide& nuclide);

  // Fetches decay datasets (and optionally level data) of several nuclides
  // concurrently so that later lookups are served from memory.
  void prefetch(std::span<const Nuclide> nuclides, bool with_levels = false);

  std::vector<std::string> warnings() const;
  std::vector<DatasetProvenance> provenance() const;
  DataAccess& access() noexcept { return access_; }

 private:
  std::vector<std::optional<RawDataset>> fetch(std::span<const DatasetKey> keys);
  void note(const RawDataset& raw);
  void add_warnings(const std::vector<std::string>& w);
  std::shared_ptr<const std::vector<DecayRecord>> store_decay(const Nuclide& erased,
                                                              std::span<const std::optional<RawDataset>> raws);
  std::shared_ptr<const LevelScheme> store_levels(const Nuclide& erased, const std::optional<RawDataset>& levels,
                                                  const std::optional<RawDataset>& transitions);

  DataAccess& access_;
  MatchTolerance tolerance_;

  mutable std::mutex mutex_;
  std::map<Nuclide, std::shared_ptr<const std::vector<DecayRecord>>> decay_;
  std::map<Nuclide, std::shared_ptr<const LevelScheme>> levels_;
  std::map<Nuclide, bool> levels_known_;
  std::vector<std::string> warnings_;
  std::map<std::string, DatasetProvenance> provenance_;
};

}  // namespace nuclib
