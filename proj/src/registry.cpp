#include "nuclib/registry.hpp"

#include <fstream>
#include <sstream>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace fs = std::filesystem;

AbsenceRegistry AbsenceRegistry::load(const fs::path& path) {
  AbsenceRegistry reg(path);
  std::error_code ec;
  if (!fs::exists(path, ec)) return reg;

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::registry_io_error, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string body = buf.str();

  for (auto line : text::split_lines(body)) {
    auto t = text::trim(line);
    if (!t.empty()) reg.entries_.emplace(t);
  }

  std::string canonical;
  for (const auto& e : reg.entries_) canonical += e + "\n";
  if (canonical != body) reg.persist_locked();
  return reg;
}

AbsenceRegistry::AbsenceRegistry(AbsenceRegistry&& other) noexcept : path_(std::move(other.path_)) {
  std::lock_guard lock(other.mutex_);
  entries_ = std::move(other.entries_);
}

bool AbsenceRegistry::contains(const DatasetKey& key) const { return contains(key.serialize()); }

bool AbsenceRegistry::contains(const std::string& serialized) const {
  std::lock_guard lock(mutex_);
  return entries_.count(serialized) != 0;
}

bool AbsenceRegistry::record(const DatasetKey& key) { return record(key.serialize()); }

bool AbsenceRegistry::record(const std::string& serialized) {
  std::lock_guard lock(mutex_);
  if (!entries_.insert(serialized).second) return false;
  try {
    persist_locked();
  } catch (...) {
    entries_.erase(serialized);
    throw;
  }
  return true;
}

std::vector<std::string> AbsenceRegistry::entries() const {
  std::lock_guard lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

void AbsenceRegistry::persist_locked() const {
  std::error_code ec;
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path(), ec);
  fs::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::registry_io_error, "cannot write " + tmp.string());
    for (const auto& e : entries_) out << e << '\n';
    if (!out.flush()) throw Error(Errc::registry_io_error, "short write to " + tmp.string());
  }
  fs::rename(tmp, path_, ec);
  if (ec) throw Error(Errc::registry_io_error, "cannot replace " + path_.string() + ": " + ec.message());
}

}  // namespace nuclib
