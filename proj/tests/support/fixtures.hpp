#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nuclib/chain.hpp"
#include "nuclib/data_access.hpp"
#include "nuclib/nuclear_data.hpp"

namespace nuclib::testing {

// fixtures/ensdf: pinned dataset corpus plus its absence registry.
std::filesystem::path fixture_dir();
std::filesystem::path fixture_root();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

void copy_dir_files(const std::filesystem::path& from, const std::filesystem::path& to);

// Offline access over a private copy of the fixture corpus.
struct FixtureData {
  TempDir dir;
  std::unique_ptr<DataAccess> access;
  std::unique_ptr<NuclearData> data;
};
std::unique_ptr<FixtureData> fixture_data(const ValidationConfig& cfg = {});

// Offline access over a directory prepared by the caller.
struct DirData {
  std::unique_ptr<DataAccess> access;
  std::unique_ptr<NuclearData> data;
};
DirData offline_data(const std::filesystem::path& dir, const ValidationConfig& cfg = {});

// One decay of a synthetic corpus. Nuclide ids use parse_nuclide_id forms.
struct SyntheticDecay {
  std::string parent;
  std::string daughter;
  std::string mode;  // A, B-, EC
  double branching = 100.0;
  double feeding_kev = 0.0;
};

// Writes decay datasets for every parent and registers all other datasets of
// every mentioned nuclide (and of extra) as absent, so the directory serves
// offline.
void write_synthetic_corpus(const std::filesystem::path& dir, const std::vector<SyntheticDecay>& decays,
                            const std::vector<Nuclide>& extra = {});

std::vector<std::string> ids(const std::vector<Nuclide>& nuclides);

}  // namespace nuclib::testing
