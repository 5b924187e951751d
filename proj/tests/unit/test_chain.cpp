#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "nuclib/chain.hpp"
#include "nuclib/error.hpp"

using namespace nuclib;
using nuclib::testing::TempDir;
using Ids = std::vector<std::string>;

TEST_CASE("linear synthetic chain ends at a stable nuclide") {
  TempDir dir;
  testing::write_synthetic_corpus(dir.path(), {{"U-230", "Th-226", "A"}, {"Th-226", "Ra-222", "A"}});
  auto d = testing::offline_data(dir.path());
  const auto p = build_progeny(Nuclide("U", 230), *d.data);
  CHECK(testing::ids(p.chain.members) == Ids{"230u", "226th"});
  CHECK(testing::ids(p.terminals) == Ids{"222ra"});
  CHECK(!p.chain.progenitor_terminal);
  CHECK(p.edges.size() == 1);
  CHECK(render_lineage(p.tree) == "U-230\n  Th-226 (100%)\n");
}

TEST_CASE("a stable progenitor is its own chain") {
  TempDir dir;
  testing::write_synthetic_corpus(dir.path(), {}, {Nuclide("Pb", 208)});
  auto d = testing::offline_data(dir.path());
  const auto p = build_progeny(Nuclide("Pb", 208), *d.data);
  CHECK(p.chain.progenitor_terminal);
  CHECK(testing::ids(p.chain.members) == Ids{"208pb"});
}

TEST_CASE("branches are ordered by decay mode and rendered by branching") {
  TempDir dir;
  testing::write_synthetic_corpus(dir.path(), {{"Bi-213", "Tl-209", "A", 2.2},
                                               {"Bi-213", "Po-213", "B-", 97.8},
                                               {"Tl-209", "Pb-209", "B-"},
                                               {"Po-213", "Pb-209", "A"},
                                               {"Pb-209", "Bi-209", "B-"}});
  auto d = testing::offline_data(dir.path());
  const auto p = build_progeny(Nuclide("Bi", 213), *d.data);
  CHECK(testing::ids(p.chain.members) == Ids{"213bi", "209tl", "213po", "209pb"});
  CHECK(render_lineage(p.tree) ==
        "Bi-213\n"
        "  Po-213 (97.8%)\n"
        "    Pb-209 (100%) [cross-reference]\n"
        "  Tl-209 (2.2%)\n"
        "    Pb-209 (100%)\n");
  const auto xref = std::count_if(p.edges.begin(), p.edges.end(), [](const LineageEdge& e) { return e.cross_reference; });
  CHECK(xref == 1);
  CHECK(p.feeding.count(Nuclide("Bi", 209)) == 1);
}

TEST_CASE("missing data stops the traversal with data_unavailable") {
  TempDir dir;
  AccessConfig cfg;
  cfg.cache_dir = dir.path();
  cfg.offline = true;
  DataAccess access(cfg);
  NuclearData data(access);
  try {
    build_progeny(Nuclide("U", 238), data);
    FAIL("expected data_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::data_unavailable);
  }
}

TEST_CASE("225Ac lineage from the fixture corpus") {
  auto fx = testing::fixture_data();
  const auto p = build_progeny(Nuclide("Ac", 225), *fx->data);
  CHECK(testing::ids(p.chain.members) == Ids{"225ac", "221fr", "217at", "213bi", "209tl", "213po", "209pb", "209bi"});
  const auto text = render_lineage(p.tree);
  CHECK(text.find("      Bi-213 (") != std::string::npos);
  CHECK(text.find("        Po-213 (97.86%)") != std::string::npos);
  CHECK(text.find("        Tl-209 (2.14%)") != std::string::npos);
  CHECK(text.find("Tl-205") == std::string::npos);
  CHECK(lineage_path("out", Nuclide("Ac", 225)) == std::filesystem::path("out") / "lineage_225ac.txt");
}

TEST_CASE("227Ac daughters: alpha branch first") {
  auto fx = testing::fixture_data();
  const auto p = build_progeny(Nuclide("Ac", 227), *fx->data);
  REQUIRE(p.chain.members.size() > 2);
  CHECK(format_nuclide_id(p.chain.members[1]) == "223fr");
  CHECK(format_nuclide_id(p.chain.members[2]) == "227th");
}

TEST_CASE("subset assembly with statics and exclusions") {
  auto fx = testing::fixture_data();
  const std::vector<Nuclide> r{Nuclide("Mo", 99)};
  const std::vector<Nuclide> s{Nuclide("K", 40)};
  const std::vector<Nuclide> e{parse_nuclide_id("Tc-99m")};
  const auto full = assemble_subset(r, s, {}, *fx->data);
  CHECK(testing::ids(full.members) == Ids{"99mo", "99tc@m", "99tc", "40k"});
  CHECK(testing::ids(full.expanded[0]) == Ids{"99mo", "99tc@m", "99tc"});
  const auto cut = assemble_subset(r, s, e, *fx->data);
  CHECK(testing::ids(cut.members) == Ids{"99mo", "99tc", "40k"});
  CHECK(testing::ids(cut.exclusions) == Ids{"99tc@m"});

  const std::vector<Nuclide> all{Nuclide("K", 40)};
  try {
    assemble_subset({}, all, all, *fx->data);
    FAIL("expected empty_subset");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::empty_subset);
  }
}

TEST_CASE("without the cascade 99mTc is not reached") {
  ValidationConfig off;
  off.cascade = false;
  auto fx = testing::fixture_data(off);
  SubsetOptions so;
  so.validation = off;
  const std::vector<Nuclide> r{Nuclide("Mo", 99)};
  const auto s = assemble_subset(r, {}, {}, *fx->data, so);
  CHECK(testing::ids(s.members) == Ids{"99mo", "99tc@m"});
}

TEST_CASE("an explicit progenitor level is canonicalized") {
  auto fx = testing::fixture_data();
  const std::vector<Nuclide> r{parse_nuclide_id("177lu@970.1757")};
  const auto s = assemble_subset(r, {}, {}, *fx->data);
  REQUIRE(s.members.size() == 2);
  CHECK(std::holds_alternative<MetastableLevel>(s.members[0].level()));
  CHECK(*s.members[0].level_kev() == doctest::Approx(970.1757));
  CHECK(s.members[1] == Nuclide("Lu", 177));
  CHECK(render_lineage(s.recursive[0].tree).rfind("Lu-177m", 0) == 0);
}
