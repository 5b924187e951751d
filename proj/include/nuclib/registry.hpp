#pragma once

#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "nuclib/dataset_key.hpp"

namespace nuclib {

// Persisted set of dataset keys the data source has authoritatively reported
// as having no data. The file is sorted, duplicate-free, one key per line, and
// is rewritten after every mutation so that file and memory always agree.
class AbsenceRegistry {
 public:
  // A missing file yields an empty registry. A file that is not already in
  // canonical form is rewritten. Throws Error(registry_io_error).
  static AbsenceRegistry load(const std::filesystem::path& path);

  AbsenceRegistry(AbsenceRegistry&& other) noexcept;
  AbsenceRegistry& operator=(AbsenceRegistry&&) = delete;

  bool contains(const DatasetKey& key) const;
  bool contains(const std::string& serialized) const;

  // Idempotent. Returns true when the key was not present before.
  bool record(const DatasetKey& key);
  bool record(const std::string& serialized);

  std::vector<std::string> entries() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  explicit AbsenceRegistry(std::filesystem::path path) : path_(std::move(path)) {}
  void persist_locked() const;

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::set<std::string> entries_;
};

}  // namespace nuclib
