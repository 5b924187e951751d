#include "nuclib/data_access.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "nuclib/error.hpp"

namespace nuclib {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxRetries = 3;
constexpr const char* kRegistryFile = "absent_registry.txt";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

thread_local StatsSink* current_sink = nullptr;

}  // namespace

ScopedStats::ScopedStats(StatsSink& sink) noexcept : previous_(current_sink) { current_sink = &sink; }
ScopedStats::~ScopedStats() { current_sink = previous_; }

void DataAccess::bump(std::atomic<std::uint64_t>& global, std::atomic<std::uint64_t> StatsSink::*field) {
  ++global;
  if (current_sink) ++(current_sink->*field);
}

void AccessConfig::apply_environment() {
  if (const char* url = std::getenv("NUCLIB_BASE_URL"); url && *url) base_url = url;
  if (const char* dir = std::getenv("NUCLIB_CACHE_DIR"); dir && *dir) cache_dir = dir;
}

DataAccess::DataAccess(AccessConfig cfg, std::shared_ptr<const RemoteAdapter> adapter,
                       std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)),
      adapter_(adapter ? std::move(adapter) : std::make_shared<LiveChartAdapter>()),
      transport_(transport ? std::move(transport) : std::make_shared<HttplibTransport>()),
      registry_(AbsenceRegistry::load(cfg_.cache_dir / kRegistryFile)),
      network_slots_(std::clamp(cfg_.max_parallel, 1, 64)) {
  cfg_.max_retries = std::clamp(cfg_.max_retries, 0, kMaxRetries);
  cfg_.max_parallel = std::clamp(cfg_.max_parallel, 1, 64);
  std::error_code ec;
  fs::create_directories(cfg_.cache_dir, ec);
  if (ec && !fs::is_directory(cfg_.cache_dir))
    throw Error(Errc::cache_write_error, "cannot create " + cfg_.cache_dir.string() + ": " + ec.message());
}

DataAccess::~DataAccess() = default;

fs::path DataAccess::cache_path(const DatasetKey& key) const { return cfg_.cache_dir / (key.file_stem() + ".csv"); }

AccessStats DataAccess::stats() const {
  return {network_calls_.load(), cache_hits_.load(), registry_skips_.load(), absent_recorded_.load()};
}

std::optional<RawDataset> DataAccess::fetch(const DatasetKey& key) {
  if (cfg_.registry_enabled && registry_.contains(key)) {
    bump(registry_skips_, &StatsSink::registry_skips);
    return std::nullopt;
  }

  const std::string id = key.serialize();
  std::promise<Result> promise;
  std::shared_future<Result> future;
  bool owner = false;
  {
    std::lock_guard lock(inflight_mutex_);
    if (auto it = inflight_.find(id); it != inflight_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      inflight_.emplace(id, future);
      owner = true;
    }
  }
  if (!owner) return future.get();

  try {
    promise.set_value(resolve(key));
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  {
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(id);
  }
  return future.get();
}

DataAccess::Result DataAccess::resolve(const DatasetKey& key) {
  const fs::path path = cache_path(key);
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    bump(cache_hits_, &StatsSink::cache_hits);
    return RawDataset{key, read_file(path), DatasetOrigin::cache};
  }
  if (cfg_.offline) throw Error(Errc::offline_miss, key.serialize() + " is not cached");

  std::string body = download(key);
  if (!adapter_->has_data(body)) {
    if (registry_.record(key)) bump(absent_recorded_, &StatsSink::absent_recorded);
    return std::nullopt;
  }
  write_cache_file(key, body);
  return RawDataset{key, std::move(body), DatasetOrigin::remote};
}

std::string DataAccess::download(const DatasetKey& key) {
  const HttpRequest request = adapter_->request_for(key);
  for (int attempt = 0;; ++attempt) {
    network_slots_.acquire();
    bump(network_calls_, &StatsSink::network_calls);
    try {
      auto response = transport_->get(cfg_.base_url, request, cfg_.timeout);
      network_slots_.release();
      return std::move(response.body);
    } catch (const Error& e) {
      network_slots_.release();
      if (e.code() != Errc::network_error || attempt >= cfg_.max_retries) throw;
    } catch (...) {
      network_slots_.release();
      throw;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(100) * (1 << attempt));
  }
}

void DataAccess::write_cache_file(const DatasetKey& key, const std::string& body) {
  const fs::path path = cache_path(key);
  thread_local std::mt19937_64 rng{std::random_device{}()};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rng());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::cache_write_error, "cannot open " + tmp.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out.flush()) throw Error(Errc::cache_write_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::cache_write_error, "cannot move into " + path.string());
  }
}

std::vector<std::optional<RawDataset>> DataAccess::fetch_all(std::span<const DatasetKey> keys) {
  std::vector<Result> results(keys.size());
  if (keys.empty()) return results;

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  StatsSink* const sink = current_sink;
  auto worker = [&] {
    current_sink = sink;
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        results[i] = fetch(keys[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::min<std::size_t>(keys.size(), static_cast<std::size_t>(cfg_.max_parallel));
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace nuclib
