#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "nuclib/dataset_key.hpp"
#include "nuclib/registry.hpp"
#include "nuclib/remote.hpp"

namespace nuclib {

struct AccessConfig {
  std::filesystem::path cache_dir = "nucdata_cache";
  std::string base_url = std::string(kDefaultBaseUrl);
  std::chrono::milliseconds timeout{30'000};
  bool offline = false;
  // When false the absence registry is not consulted before fetching.
  bool registry_enabled = true;
  // Transport retries after the first attempt, capped at 3.
  int max_retries = 0;
  int max_parallel = 4;

  // NUCLIB_BASE_URL and NUCLIB_CACHE_DIR override the corresponding fields.
  void apply_environment();
};

enum class DatasetOrigin : std::uint8_t { cache, remote };

struct RawDataset {
  DatasetKey key;
  std::string body;  // CSV; first line is the header
  DatasetOrigin origin;
};

struct AccessStats {
  std::uint64_t network_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t registry_skips = 0;
  std::uint64_t absent_recorded = 0;

  AccessStats operator-(const AccessStats& o) const {
    return {network_calls - o.network_calls, cache_hits - o.cache_hits,
            registry_skips - o.registry_skips, absent_recorded - o.absent_recorded};
  }
};

// Per-caller counters. While a ScopedStats is alive on a thread, every fetch
// issued from that thread (including fetch_all workers it starts) is also
// counted here, so concurrent jobs sharing one DataAccess get exact counts.
struct StatsSink {
  std::atomic<std::uint64_t> network_calls{0};
  std::atomic<std::uint64_t> cache_hits{0};
  std::atomic<std::uint64_t> registry_skips{0};
  std::atomic<std::uint64_t> absent_recorded{0};

  AccessStats snapshot() const {
    return {network_calls.load(), cache_hits.load(), registry_skips.load(), absent_recorded.load()};
  }
};

class ScopedStats {
 public:
  explicit ScopedStats(StatsSink& sink) noexcept;
  ~ScopedStats();
  ScopedStats(const ScopedStats&) = delete;
  ScopedStats& operator=(const ScopedStats&) = delete;

 private:
  StatsSink* previous_;
};

// Screened retrieval: absence registry, then disk cache, then one GET.
// Thread-safe. Concurrent requests for the same key share a single
// resolution, and network calls are bounded by max_parallel.
class DataAccess {
 public:
  explicit DataAccess(AccessConfig cfg, std::shared_ptr<const RemoteAdapter> adapter = nullptr,
                      std::shared_ptr<HttpTransport> transport = nullptr);
  ~DataAccess();

  DataAccess(const DataAccess&) = delete;
  DataAccess& operator=(const DataAccess&) = delete;

  // nullopt means absent. Throws Error(network_error | offline_miss | cache_write_error).
  std::optional<RawDataset> fetch(const DatasetKey& key);

  // Resolves all keys with up to max_parallel workers; results in input order.
  std::vector<std::optional<RawDataset>> fetch_all(std::span<const DatasetKey> keys);

  std::filesystem::path cache_path(const DatasetKey& key) const;
  AccessStats stats() const;
  const AccessConfig& config() const noexcept { return cfg_; }
  const AbsenceRegistry& registry() const noexcept { return registry_; }
  std::string source_id() const { return adapter_->source_id(); }

 private:
  using Result = std::optional<RawDataset>;
  Result resolve(const DatasetKey& key);
  std::string download(const DatasetKey& key);
  void write_cache_file(const DatasetKey& key, const std::string& body);
  static void bump(std::atomic<std::uint64_t>& global, std::atomic<std::uint64_t> StatsSink::*field);

  AccessConfig cfg_;
  std::shared_ptr<const RemoteAdapter> adapter_;
  std::shared_ptr<HttpTransport> transport_;
  AbsenceRegistry registry_;

  std::mutex inflight_mutex_;
  std::map<std::string, std::shared_future<Result>> inflight_;
  std::counting_semaphore<64> network_slots_;

  std::atomic<std::uint64_t> network_calls_{0};
  std::atomic<std::uint64_t> cache_hits_{0};
  std::atomic<std::uint64_t> registry_skips_{0};
  std::atomic<std::uint64_t> absent_recorded_{0};
};

}  // namespace nuclib
