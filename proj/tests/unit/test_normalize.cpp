#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/normalize.hpp"

using namespace nuclib;

namespace {

RawDataset fixture(const std::string& key) {
  const auto k = DatasetKey::parse(key);
  return {k, read_text_file(testing::fixture_dir() / (k.file_stem() + ".csv")), DatasetOrigin::cache};
}

const char* kDecayHeader =
    "energy,unc_en,intensity,unc_i,start_level_energy,end_level_energy,p_z,p_n,p_symbol,p_energy,unc_pe,"
    "p_half_life_sec,unc_hls,decay,decay_%,unc_d,d_z,d_n,d_symbol\n";

}  // namespace

TEST_CASE("decay rows of 213Bi") {
  const auto p = parse_decay_records(fixture("213bi:dr-bm"));
  REQUIRE(!p.records.empty());
  const auto& r = p.records.front();
  CHECK(r.parent == Nuclide("Bi", 213));
  CHECK(r.daughter == Nuclide("Po", 213));
  CHECK(r.radiation == RadiationType::beta_minus);
  CHECK(r.decay_mode == DecayMode::beta_minus);
  CHECK(r.branching_percent == doctest::Approx(97.86));
  CHECK(r.energy->kev == doctest::Approx(491.8));
  CHECK(*r.intensity == doctest::Approx(66.8));
  CHECK(r.parent_half_life->seconds() == doctest::Approx(2735.4));
  CHECK(r.is_particle());
  CHECK(r.row == 1);
}

TEST_CASE("gamma rows carry the daughter level they start from") {
  const auto p = parse_decay_records(fixture("213bi:dr-g"));
  const auto it = std::find_if(p.records.begin(), p.records.end(),
                               [](const DecayRecord& r) { return r.energy && r.energy->kev == 292.8; });
  REQUIRE(it != p.records.end());
  CHECK(it->start_level->kev == doctest::Approx(292.805));
  CHECK(!it->is_particle());
}

TEST_CASE("bad decay rows are skipped with a warning") {
  const std::string body = std::string(kDecayHeader) +
                           "5000,1,50,1,,0,89,136,Ac,0,0,100,1,A,100,0,87,134,Fr\n"
                           "oops,1,50,1,,0,89,136,Ac,0,0,100,1,A,100,0,87,134,Fr\n"
                           "5100,1,,,,0,89,136,Ac,0,0,100,1,A,100,0,87,134,Fr\n";
  const RawDataset raw{DatasetKey::parse("225ac:dr-a"), body, DatasetOrigin::cache};
  const auto p = parse_decay_records(raw);
  CHECK(p.records.size() == 2);
  CHECK(!p.warnings.empty());
  CHECK(!p.records[1].intensity);
}

TEST_CASE("missing columns are a header mismatch") {
  const RawDataset raw{DatasetKey::parse("225ac:dr-a"), "energy,intensity\n1,2\n", DatasetOrigin::cache};
  try {
    parse_decay_records(raw);
    FAIL("expected header_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::header_mismatch);
  }
}

TEST_CASE("level scheme of 99Tc") {
  const auto p = parse_level_scheme(fixture("99tc:lv"), fixture("99tc:tr"));
  const auto& s = p.scheme;
  REQUIRE(s.levels.size() >= 4);
  CHECK(s.levels[0].energy.kev == 0.0);
  for (std::size_t i = 1; i < s.levels.size(); ++i) CHECK(s.levels[i - 1].energy.kev < s.levels[i].energy.kev);
  const auto idx = s.resolve({142.6836, 0.0011});
  REQUIRE(idx);
  const auto& iso = s.levels[*idx];
  CHECK(iso.half_life->seconds() == doctest::Approx(21625.92));
  CHECK(iso.has_mode(DecayMode::it));
  CHECK(iso.has_mode(DecayMode::beta_minus));
  for (const auto& t : s.transitions) CHECK(t.start_level.kev > t.end_level.kev);
}

TEST_CASE("inconsistent transitions are dropped with warnings") {
  const std::string lv =
      "z,n,symbol,energy,unc_e,jp,half_life,unit_hl,half_life_sec,unc_hls,decay_1,decay_1_%,unc_1\n"
      "43,56,Tc,0,0,,,,,,,,\n"
      "43,56,Tc,100,0.1,,,,,,,,\n"
      "43,56,Tc,200,0.1,,,,,,,,\n";
  const std::string tr =
      "z,n,symbol,start_level_energy,end_level_energy,energy,unc_en,relative_intensity,unc_ri,multipolarity\n"
      "43,56,Tc,200,100,100,0.1,10,1,\n"
      "43,56,Tc,100,200,100,0.1,10,1,\n"
      "43,56,Tc,700,0,700,0.1,10,1,\n";
  const auto p = parse_level_scheme({DatasetKey::parse("99tc:lv"), lv, DatasetOrigin::cache},
                                    RawDataset{DatasetKey::parse("99tc:tr"), tr, DatasetOrigin::cache});
  CHECK(p.scheme.transitions.size() == 1);
  CHECK(p.warnings.size() == 2);
}

TEST_CASE("level and transition datasets must belong together") {
  CHECK_THROWS_AS(parse_level_scheme(fixture("99tc:lv"), fixture("213bi:tr")), Error);
}

TEST_CASE("daughters are ranked by decay mode") {
  std::vector<DecayRecord> all;
  for (const char* k : {"227ac:dr-bm", "227ac:dr-a"}) {
    auto p = parse_decay_records(fixture(k));
    all.insert(all.end(), p.records.begin(), p.records.end());
  }
  const auto d = extract_daughters(all);
  REQUIRE(d.size() == 2);
  CHECK(d[0].daughter == Nuclide("Fr", 223));
  CHECK(d[1].daughter == Nuclide("Th", 227));
  CHECK(d[0].branching_percent == doctest::Approx(1.38));
  std::reverse(all.begin(), all.end());
  CHECK(extract_daughters(all)[0].daughter == Nuclide("Fr", 223));
}
