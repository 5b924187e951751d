#include <cstdlib>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "mock_server.hpp"
#include "nuclib/data_access.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"

using namespace nuclib;
using nuclib::testing::MockServer;
using nuclib::testing::TempDir;
namespace fs = std::filesystem;

namespace {

DatasetKey key(std::string_view s) { return DatasetKey::parse(s); }

AccessConfig config_for(const TempDir& dir, const MockServer& server) {
  AccessConfig cfg;
  cfg.cache_dir = dir.path();
  cfg.base_url = server.base_url();
  return cfg;
}

}  // namespace

TEST_CASE("dataset keys") {
  const DatasetKey k(parse_nuclide_id("Ac-225"), DatasetKind::decay(RadiationType::alpha));
  CHECK(k.serialize() == "225ac:dr-a");
  CHECK(k.file_stem() == "225ac_dr-a");
  CHECK(DatasetKey::parse("225ac:dr-a") == k);
  CHECK(DatasetKey(parse_nuclide_id("Tc-99m"), DatasetKind::levels()).serialize() == "99tc:lv");
  for (const char* code : {"dr-a", "dr-bm", "dr-bp", "dr-g", "dr-e", "dr-x", "lv", "tr"})
    CHECK(DatasetKind::from_code(code)->code() == code);
  CHECK_THROWS_AS(DatasetKey::parse("225ac"), Error);
  CHECK_THROWS_AS(DatasetKey::parse("225ac:zz"), Error);
}

TEST_CASE("absence registry") {
  TempDir dir;
  const auto path = dir.path() / "absent_registry.txt";
  CHECK(AbsenceRegistry::load(path).entries().empty());
  {
    std::ofstream out(path);
    out << "b\na\na\n";
  }
  auto reg = AbsenceRegistry::load(path);
  CHECK(reg.entries() == std::vector<std::string>{"a", "b"});
  CHECK(read_text_file(path) == "a\nb\n");
  CHECK(reg.record("c"));
  CHECK(!reg.record("c"));
  CHECK(read_text_file(path) == "a\nb\nc\n");
}

TEST_CASE("registered keys are skipped without disk or network") {
  MockServer server(testing::fixture_dir());
  TempDir dir;
  AbsenceRegistry::load(dir.path() / "absent_registry.txt").record("209bi:dr-x");
  DataAccess access(config_for(dir, server));
  CHECK(!access.fetch(key("209bi:dr-x")));
  CHECK(server.requests() == 0);
  CHECK(access.stats().registry_skips == 1);
}

TEST_CASE("remote fetch writes the cache and a second fetch reads it") {
  MockServer server(testing::fixture_dir());
  TempDir dir;
  {
    DataAccess access(config_for(dir, server));
    auto raw = access.fetch(key("225ac:dr-a"));
    REQUIRE(raw);
    CHECK(raw->origin == DatasetOrigin::remote);
    CHECK(fs::exists(dir.path() / "225ac_dr-a.csv"));
    CHECK(server.requests() == 1);
  }
  DataAccess again(config_for(dir, server));
  auto raw = again.fetch(key("225ac:dr-a"));
  REQUIRE(raw);
  CHECK(raw->origin == DatasetOrigin::cache);
  CHECK(server.requests() == 1);
  CHECK(again.stats().cache_hits == 1);
}

TEST_CASE("a data-less reply is recorded absent") {
  MockServer server(testing::fixture_dir());
  TempDir dir;
  DataAccess access(config_for(dir, server));
  CHECK(!access.fetch(key("225ac:dr-x")));
  CHECK(access.registry().contains("225ac:dr-x"));
  CHECK(!fs::exists(dir.path() / "225ac_dr-x.csv"));
  CHECK(access.stats().absent_recorded == 1);
  CHECK(!access.fetch(key("225ac:dr-x")));
  CHECK(server.requests() == 1);
}

TEST_CASE("transport failures are not recorded absent") {
  MockServer server(testing::fixture_dir());
  server.set_failure_status(503);
  TempDir dir;
  auto cfg = config_for(dir, server);
  cfg.max_retries = 2;
  DataAccess access(cfg);
  try {
    access.fetch(key("225ac:dr-a"));
    FAIL("expected network_error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::network_error);
  }
  CHECK(server.requests() == 3);
  CHECK(!access.registry().contains("225ac:dr-a"));

  auto dead = cfg;
  dead.base_url = "http://127.0.0.1:1/none";
  dead.max_retries = 0;
  DataAccess unreachable(dead);
  CHECK_THROWS_AS(unreachable.fetch(key("225ac:dr-g")), Error);
  CHECK(!unreachable.registry().contains("225ac:dr-g"));
}

TEST_CASE("offline cache miss") {
  TempDir dir;
  AccessConfig cfg;
  cfg.cache_dir = dir.path();
  cfg.offline = true;
  DataAccess access(cfg);
  try {
    access.fetch(key("225ac:dr-a"));
    FAIL("expected offline_miss");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::offline_miss);
  }
}

TEST_CASE("concurrent fetches of one key share one request") {
  MockServer server(testing::fixture_dir(), std::chrono::milliseconds(100));
  TempDir dir;
  DataAccess access(config_for(dir, server));
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { access.fetch(key("213bi:dr-g")); });
  threads.clear();
  CHECK(server.requests_for("213bi:dr-g") == 1);
}

TEST_CASE("fetch_all returns results in input order") {
  MockServer server(testing::fixture_dir());
  TempDir dir;
  DataAccess access(config_for(dir, server));
  const std::vector<DatasetKey> keys{key("213bi:dr-a"), key("213bi:dr-x"), key("213bi:lv")};
  const auto r = access.fetch_all(keys);
  REQUIRE(r.size() == 3);
  CHECK(r[0]->key == keys[0]);
  CHECK(!r[1]);
  CHECK(r[2]->key == keys[2]);
}

TEST_CASE("per-caller statistics") {
  auto fx = testing::fixture_data();
  StatsSink a, b;
  {
    ScopedStats s(a);
    fx->access->fetch(key("213bi:dr-a"));
  }
  {
    ScopedStats s(b);
    const std::vector<DatasetKey> keys{key("213bi:dr-g"), key("177hf:dr-a")};
    fx->access->fetch_all(keys);
  }
  CHECK(a.snapshot().cache_hits == 1);
  CHECK(b.snapshot().cache_hits == 1);
  CHECK(b.snapshot().registry_skips == 1);
  CHECK(fx->access->stats().cache_hits == 2);
}

TEST_CASE("environment overrides") {
  setenv("NUCLIB_BASE_URL", "http://example.invalid/x", 1);
  setenv("NUCLIB_CACHE_DIR", "/tmp/nuclib-env-cache", 1);
  AccessConfig cfg;
  cfg.apply_environment();
  CHECK(cfg.base_url == "http://example.invalid/x");
  CHECK(cfg.cache_dir == "/tmp/nuclib-env-cache");
  unsetenv("NUCLIB_BASE_URL");
  unsetenv("NUCLIB_CACHE_DIR");
}
