#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mock_server.hpp"
#include "nuclib/chain.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/identify.hpp"
#include "nuclib/level_validation.hpp"
#include "nuclib/library.hpp"

using namespace nuclib;
using nuclib::testing::TempDir;

namespace {

// A random decay graph over synthetic nuclides. Edges mostly point forward,
// several parents may share a daughter, and with allow_cycles some edges
// point backward so that the traversal meets nuclides it already expanded.
struct RandomGraph {
  std::vector<Nuclide> nodes;
  std::map<Nuclide, std::vector<Nuclide>> daughters;
  std::vector<testing::SyntheticDecay> decays;

  bool radioactive(const Nuclide& n) const { return daughters.count(n) > 0; }

  std::set<Nuclide> closure(const Nuclide& root) const {
    std::set<Nuclide> seen{root};
    std::vector<Nuclide> stack{root};
    while (!stack.empty()) {
      const Nuclide n = stack.back();
      stack.pop_back();
      auto it = daughters.find(n);
      if (it == daughters.end()) continue;
      for (const auto& d : it->second)
        if (radioactive(d) && seen.insert(d).second) stack.push_back(d);
    }
    return seen;
  }
};

RandomGraph random_graph(std::mt19937& rng, int n, bool allow_cycles) {
  RandomGraph g;
  for (int i = 0; i < n; ++i) g.nodes.emplace_back(20 + (i * 7) % 70, 100 + i);
  const char* modes[] = {"A", "B-", "EC"};
  std::uniform_int_distribution<int> n_daughters(0, 3);
  for (int i = 0; i < n; ++i) {
    int k = n_daughters(rng);
    if (i == 0 && k == 0) k = 1;
    std::set<int> targets;
    for (int t = 0; t < k; ++t) {
      int j;
      if (allow_cycles && std::uniform_int_distribution<int>(0, 5)(rng) == 0)
        j = std::uniform_int_distribution<int>(0, n - 1)(rng);
      else if (i + 1 < n)
        j = std::uniform_int_distribution<int>(i + 1, std::min(n - 1, i + 6))(rng);
      else
        continue;
      if (j != i) targets.insert(j);
    }
    if (targets.empty()) continue;
    double remaining = 100.0;
    std::size_t idx = 0;
    for (int j : targets) {
      const double br = ++idx == targets.size() ? remaining : std::round(remaining * 0.6 * 100) / 100;
      remaining -= br;
      g.daughters[g.nodes[i]].push_back(g.nodes[j]);
      g.decays.push_back({format_nuclide_id(g.nodes[i]), format_nuclide_id(g.nodes[j]),
                          modes[std::uniform_int_distribution<int>(0, 2)(rng)], br, 0.0});
    }
  }
  return g;
}

LevelScheme random_scheme(std::mt19937& rng, int n_levels) {
  LevelScheme s;
  s.nuclide = Nuclide("Tc", 99);
  for (int i = 0; i < n_levels; ++i) s.levels.push_back({s.nuclide, {100.0 * i, 0.0}, {}, {}, {}});
  std::uniform_int_distribution<int> coin(0, 2);
  for (int i = 1; i < n_levels; ++i)
    for (int j = 0; j < i; ++j)
      if (coin(rng) == 0)
        s.transitions.push_back({s.nuclide, s.levels[i].energy, s.levels[j].energy, {100.0 * (i - j), 0.0}, 1.0});
  return s;
}

RadionuclideLibrary random_library(std::mt19937& rng, std::size_t n) {
  RadionuclideLibrary lib;
  lib.radiation = RadiationType::gamma;
  std::uniform_real_distribution<double> energy(0.0, 3000.0), intensity(1e-5, 100.0), u(0.0, 1.0);
  const std::vector<Nuclide> emitters{Nuclide("Tc", 99, MetastableLevel{1}), Nuclide("Mo", 99), Nuclide("Ra", 226),
                                      Nuclide("Lu", 177, EnergyLevel{970.1757}), Nuclide("K", 40)};
  for (std::size_t i = 0; i < n; ++i) {
    LibraryEntry e;
    e.nuclide = emitters[i % emitters.size()];
    e.radiation = lib.radiation;
    e.energy = {energy(rng), u(rng) < 0.2 ? 0.0 : u(rng)};
    if (u(rng) > 0.1) e.intensity_percent = intensity(rng);
    e.intensity_uncertainty = u(rng) < 0.3 ? 0.0 : u(rng);
    if (u(rng) > 0.2) e.half_life = HalfLife::from_seconds(std::pow(10.0, 12 * u(rng) - 3));
    e.parent_level = {u(rng) < 0.5 ? 0.0 : 1000 * u(rng), 0.0};
    e.unvalidated = u(rng) < 0.2;
    e.no_uncertainty = u(rng) < 0.3;
    lib.entries.push_back(e);
  }
  return lib;
}

PruneBounds random_bounds(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PruneBounds b;
  const double e1 = 3000 * u(rng), e2 = 3000 * u(rng);
  b.energy_kev = {std::min(e1, e2), std::max(e1, e2)};
  const double i1 = u(rng) < 0.3 ? 0.0 : 100 * u(rng) * u(rng);
  b.intensity_percent = {i1, std::max(i1, 100 * u(rng))};
  if (u(rng) < 0.5) b.half_life_seconds = Interval{u(rng) < 0.5 ? 0.0 : std::pow(10.0, 6 * u(rng)), 1e8};
  return b;
}

std::set<std::pair<Nuclide, double>> keys(const RadionuclideLibrary& lib) {
  std::set<std::pair<Nuclide, double>> out;
  for (const auto& e : lib.entries) out.insert({e.nuclide, e.energy.kev});
  return out;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("subset membership is the union of closures and statics minus exclusions") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      TempDir dir;
      const auto g = random_graph(rng, 24, false);
      testing::write_synthetic_corpus(dir.path(), g.decays, g.nodes);
      auto d = testing::offline_data(dir.path());

      std::vector<Nuclide> radioactive;
      for (const auto& n : g.nodes)
        if (g.radioactive(n)) radioactive.push_back(n);
      std::vector<Nuclide> r, s, e;
      std::uniform_int_distribution<int> coin(0, 5);
      for (const auto& n : radioactive)
        if (coin(rng) == 0) r.push_back(n);
      for (const auto& n : g.nodes) {
        if (coin(rng) == 0) s.push_back(n);
        if (coin(rng) == 0) e.push_back(n);
      }
      std::set<Nuclide> want;
      for (const auto& n : r) want.merge(g.closure(n));
      want.insert(s.begin(), s.end());
      for (const auto& n : e) want.erase(n);

      if (want.empty()) {
        CHECK_THROWS_AS(assemble_subset(r, s, e, *d.data), Error);
        continue;
      }
      const auto subset = assemble_subset(r, s, e, *d.data);
      const std::set<Nuclide> got(subset.members.begin(), subset.members.end());
      CHECK(got == want);
      CHECK(got.size() == subset.members.size());
    }
  }

  TEST_CASE("progeny traversal terminates and expands each nuclide once") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
      TempDir dir;
      const auto g = random_graph(rng, 30, trial % 2 == 1);
      testing::write_synthetic_corpus(dir.path(), g.decays, g.nodes);
      auto d = testing::offline_data(dir.path());
      const Nuclide root = g.nodes[0];
      const auto p = build_progeny(root, *d.data);

      const auto want = g.closure(root);
      const std::set<Nuclide> got(p.chain.members.begin(), p.chain.members.end());
      CHECK(got == want);
      CHECK(p.chain.members.size() == want.size());

      std::set<std::pair<Nuclide, Nuclide>> want_edges;
      for (const auto& n : want)
        if (auto it = g.daughters.find(n); it != g.daughters.end())
          for (const auto& dd : it->second)
            if (g.radioactive(dd)) want_edges.insert({n, dd});
      std::set<std::pair<Nuclide, Nuclide>> got_edges;
      std::size_t expanded = 0;
      for (const auto& e : p.edges) {
        got_edges.insert({e.parent, e.daughter});
        if (!e.cross_reference) ++expanded;
      }
      CHECK(got_edges == want_edges);
      CHECK(got_edges.size() == p.edges.size());
      CHECK(expanded + 1 == want.size());
    }
  }

  TEST_CASE("depth cap bounds the traversal") {
    TempDir dir;
    std::vector<testing::SyntheticDecay> line;
    for (int i = 0; i < 12; ++i)
      line.push_back({format_nuclide_id(Nuclide(30 + i, 100 + i)), format_nuclide_id(Nuclide(31 + i, 101 + i)), "B-"});
    testing::write_synthetic_corpus(dir.path(), line);
    auto d = testing::offline_data(dir.path());
    ProgenyOptions tight;
    tight.depth_cap = 5;
    try {
      build_progeny(Nuclide(30, 100), *d.data, tight);
      FAIL("expected depth_exceeded");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::depth_exceeded);
    }
    CHECK(build_progeny(Nuclide(30, 100), *d.data).chain.members.size() == 12);
  }

  TEST_CASE("prune is idempotent, monotone and commutes across axes") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const auto lib = random_library(rng, 60);
      const auto b = random_bounds(rng);
      const auto once = prune(lib, b);
      CHECK(prune(once, b).entries == once.entries);

      PruneBounds narrower = b;
      narrower.energy_kev.lo += (narrower.energy_kev.hi - narrower.energy_kev.lo) * 0.25;
      narrower.intensity_percent.lo = std::max(narrower.intensity_percent.lo, 1.0);
      if (narrower.intensity_percent.lo > narrower.intensity_percent.hi)
        narrower.intensity_percent.hi = narrower.intensity_percent.lo;
      const auto narrow = keys(prune(lib, narrower));
      const auto wide = keys(once);
      CHECK(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end()));

      PruneBounds only_energy, only_intensity;
      only_energy.energy_kev = b.energy_kev;
      only_intensity.intensity_percent = b.intensity_percent;
      only_intensity.half_life_seconds = b.half_life_seconds;
      const auto ab = prune(prune(lib, only_energy), only_intensity);
      const auto ba = prune(prune(lib, only_intensity), only_energy);
      CHECK(ab.entries == ba.entries);
      CHECK(ab.entries == once.entries);
      CHECK(ab.bounds == ba.bounds);
    }
  }

  TEST_CASE("cascade visit is monotone and idempotent") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const auto scheme = random_scheme(rng, 12);
      std::vector<EnergyValue> small, large;
      std::uniform_int_distribution<int> coin(0, 3);
      for (const auto& l : scheme.levels) {
        const int c = coin(rng);
        if (c == 0) small.push_back(l.energy);
        if (c <= 1) large.push_back(l.energy);
      }
      const auto vs = cascade_visit(small, scheme).visited;
      const auto vl = cascade_visit(large, scheme).visited;
      auto kev = [](const std::vector<EnergyValue>& v) {
        std::set<double> s;
        for (const auto& e : v) s.insert(e.kev);
        return s;
      };
      const auto ss = kev(vs), sl = kev(vl);
      CHECK(std::includes(sl.begin(), sl.end(), ss.begin(), ss.end()));
      CHECK(kev(cascade_visit(vl, scheme).visited) == sl);
      for (const auto& e : small) CHECK(ss.count(e.kev) == 1);
    }
  }

  TEST_CASE("nuclide ids round-trip through their canonical form") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> z(1, kMaxAtomicNumber), kind(0, 2), ord(1, 6);
    std::uniform_real_distribution<double> kev(0.001, 5000.0);
    for (int i = 0; i < 2000; ++i) {
      const int zz = z(rng);
      const int a = std::uniform_int_distribution<int>(std::min(zz, kMaxMassNumber), kMaxMassNumber)(rng);
      LevelSpec level = GroundLevel{};
      if (const int k = kind(rng); k == 1) level = MetastableLevel{ord(rng)};
      else if (k == 2) level = EnergyLevel{kev(rng)};
      const Nuclide n(zz, a, level);
      CHECK(parse_nuclide_id(format_nuclide_id(n)) == n);
    }
  }

  TEST_CASE("half-life unit conversion round-trips") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> exp10(-6.0, 12.0);
    for (int i = 0; i < 1000; ++i) {
      const double years = std::pow(10.0, exp10(rng));
      const auto h = HalfLife::from_value(years, TimeUnit::y);
      CHECK(std::abs(h.in(TimeUnit::y) / years - 1.0) < 1e-9);
    }
  }

  TEST_CASE("CSV export then import is the identity") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
      const auto lib = random_library(rng, 40);
      const auto back = parse_library_csv(render_table(lib, TableFormat::csv));
      CHECK(back.radiation == lib.radiation);
      CHECK(back.entries == lib.entries);
    }
  }

  TEST_CASE("peak candidates grow with the tolerance and ignore peak order") {
    std::mt19937 rng(31);
    const auto lib = random_library(rng, 300);
    std::uniform_real_distribution<double> c(0.0, 3000.0);
    PeakList peaks;
    for (int i = 0; i < 40; ++i) peaks.peaks.push_back({c(rng), std::nullopt});
    for (double tol : {0.5, 2.0, 10.0}) {
      const auto narrow = qualify_peaks(peaks, lib, tol);
      const auto wide = qualify_peaks(peaks, lib, tol * 3);
      for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
        const auto a = keys(RadionuclideLibrary{lib.radiation, narrow[i].candidates, {}, {}});
        const auto b = keys(RadionuclideLibrary{lib.radiation, wide[i].candidates, {}, {}});
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      }
      PeakList shuffled = peaks;
      std::shuffle(shuffled.peaks.begin(), shuffled.peaks.end(), rng);
      const auto m = qualify_peaks(shuffled, lib, tol);
      for (const auto& pm : m) {
        auto it = std::find_if(narrow.begin(), narrow.end(), [&](const PeakMatch& x) { return x.peak == pm.peak; });
        REQUIRE(it != narrow.end());
        CHECK(it->candidates == pm.candidates);
      }
    }
  }

  TEST_CASE("a dataset is never both cached and registered absent") {
    testing::MockServer server(testing::fixture_dir());
    TempDir cache;
    AccessConfig cfg;
    cfg.cache_dir = cache.path();
    cfg.base_url = server.base_url();
    std::mt19937 rng(41);
    const std::vector<std::string> names{"225ac", "221fr", "209bi", "177hf", "99mo", "40k", "213bi", "205tl"};
    std::vector<DatasetKey> requested;
    {
      DataAccess access(cfg);
      for (int i = 0; i < 60; ++i) {
        const Nuclide n = parse_nuclide_id(names[rng() % names.size()]);
        const auto code = std::vector<std::string>{"dr-a", "dr-bm", "dr-bp", "dr-g", "dr-e", "dr-x", "lv", "tr"}[rng() % 8];
        const DatasetKey key(n, *DatasetKind::from_code(code));
        requested.push_back(key);
        access.fetch(key);
        for (const auto& k : requested)
          CHECK(std::filesystem::exists(access.cache_path(k)) != access.registry().contains(k));
      }
    }
    // Replaying against a dead server is served entirely from disk.
    AccessConfig dead = cfg;
    dead.base_url = "http://127.0.0.1:1/none";
    DataAccess replay(dead);
    for (const auto& k : requested) replay.fetch(k);
    CHECK(replay.stats().network_calls == 0);
  }
}
