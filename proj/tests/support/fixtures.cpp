#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "nuclib/dataset_key.hpp"
#include "nuclib/registry.hpp"
#include "nuclib/text.hpp"

namespace nuclib::testing {

namespace fs = std::filesystem;

fs::path fixture_root() { return NUCLIB_FIXTURE_DIR; }
fs::path fixture_dir() { return fixture_root() / "ensdf"; }

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("nuclib_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void copy_dir_files(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  for (const auto& e : fs::directory_iterator(from))
    if (e.is_regular_file()) fs::copy_file(e.path(), to / e.path().filename(), fs::copy_options::overwrite_existing);
}

std::unique_ptr<FixtureData> fixture_data(const ValidationConfig& cfg) {
  auto fd = std::make_unique<FixtureData>();
  copy_dir_files(fixture_dir(), fd->dir.path());
  auto d = offline_data(fd->dir.path(), cfg);
  fd->access = std::move(d.access);
  fd->data = std::move(d.data);
  return fd;
}

DirData offline_data(const fs::path& dir, const ValidationConfig& cfg) {
  AccessConfig ac;
  ac.cache_dir = dir;
  ac.offline = true;
  DirData d;
  d.access = std::make_unique<DataAccess>(ac);
  d.data = std::make_unique<NuclearData>(*d.access, cfg.tolerance);
  return d;
}

void write_synthetic_corpus(const fs::path& dir, const std::vector<SyntheticDecay>& decays,
                            const std::vector<Nuclide>& extra) {
  fs::create_directories(dir);
  const std::string header =
      "energy,unc_en,intensity,unc_i,start_level_energy,end_level_energy,p_z,p_n,p_symbol,p_energy,unc_pe,"
      "p_half_life_sec,unc_hls,decay,decay_%,unc_d,d_z,d_n,d_symbol\n";
  std::map<std::string, std::string> files;  // serialized key -> body
  std::set<Nuclide> mentioned;
  for (const auto& n : extra) mentioned.insert(n.level_erased());
  for (const auto& d : decays) {
    const Nuclide p = parse_nuclide_id(d.parent).level_erased();
    const Nuclide q = parse_nuclide_id(d.daughter).level_erased();
    mentioned.insert(p);
    mentioned.insert(q);
    const auto mode = parse_decay_mode(d.mode);
    RadiationType rad = RadiationType::alpha;
    if (mode == DecayMode::beta_minus) rad = RadiationType::beta_minus;
    if (mode == DecayMode::beta_plus_ec) rad = RadiationType::beta_plus_ec;
    const DatasetKey key(p, DatasetKind::decay(rad));
    auto& body = files[key.serialize()];
    if (body.empty()) body = header;
    const std::string energy = rad == RadiationType::alpha ? "5000" : "300";
    body += energy + ",1," + text::format_double(d.branching) + ",0.1,," + text::format_double(d.feeding_kev) + "," +
            std::to_string(p.z()) + "," + std::to_string(p.mass_number() - p.z()) + "," + std::string(p.element()) +
            ",0,0,100,1," + d.mode + "," + text::format_double(d.branching) + ",0.1," + std::to_string(q.z()) + "," +
            std::to_string(q.mass_number() - q.z()) + "," + std::string(q.element()) + "\n";
  }
  auto registry = AbsenceRegistry::load(dir / "absent_registry.txt");
  for (const auto& n : mentioned) {
    std::vector<DatasetKey> keys;
    for (auto r : kAllRadiationTypes) keys.emplace_back(n, DatasetKind::decay(r));
    keys.emplace_back(n, DatasetKind::levels());
    keys.emplace_back(n, DatasetKind::transitions());
    for (const auto& k : keys) {
      auto it = files.find(k.serialize());
      if (it == files.end()) {
        registry.record(k);
        continue;
      }
      std::ofstream out(dir / (k.file_stem() + ".csv"), std::ios::binary);
      out << it->second;
    }
  }
}

std::vector<std::string> ids(const std::vector<Nuclide>& nuclides) {
  std::vector<std::string> out;
  for (const auto& n : nuclides) out.push_back(format_nuclide_id(n));
  return out;
}

}  // namespace nuclib::testing
