#include <cmath>

#include "doctest.h"
#include "nuclib/error.hpp"
#include "nuclib/nuclide.hpp"
#include "nuclib/text.hpp"

using namespace nuclib;

namespace {

Errc code_of(std::string_view id) {
  try {
    parse_nuclide_id(id);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << id);
  return Errc::io_error;
}

}  // namespace

TEST_CASE("nuclide ids in the accepted spellings") {
  const Nuclide u238("U", 238);
  CHECK(parse_nuclide_id("U-238") == u238);
  CHECK(parse_nuclide_id("238U") == u238);
  CHECK(parse_nuclide_id("u238") == u238);
  CHECK(parse_nuclide_id(" 238u ") == u238);
  const Nuclide pa234m("Pa", 234, MetastableLevel{1});
  CHECK(parse_nuclide_id("234mPa") == pa234m);
  CHECK(parse_nuclide_id("Pa-234m") == pa234m);
  CHECK(parse_nuclide_id("234pa@m") == pa234m);
  CHECK(parse_nuclide_id("²³⁴ᵐPa") == pa234m);
  CHECK(parse_nuclide_id("Tc-99m") == Nuclide("Tc", 99, MetastableLevel{1}));
  CHECK(parse_nuclide_id("Ac-225@m2") == Nuclide("Ac", 225, MetastableLevel{2}));
  CHECK(parse_nuclide_id("177lu@m4") == Nuclide("Lu", 177, MetastableLevel{4}));
  CHECK(parse_nuclide_id("177lu@970.1757") == Nuclide("Lu", 177, EnergyLevel{970.1757}));
}

TEST_CASE("malformed nuclide ids") {
  CHECK(code_of("Xq-10") == Errc::unknown_element);
  CHECK(code_of("") == Errc::malformed_id);
  CHECK(code_of("U-") == Errc::malformed_id);
  CHECK(code_of("-238") == Errc::malformed_id);
  CHECK(code_of("U-238-1") == Errc::malformed_id);
  CHECK(code_of("U-0") == Errc::mass_out_of_range);
  CHECK(code_of("U-301") == Errc::mass_out_of_range);
  CHECK_THROWS_AS(Nuclide("U", 0), Error);
}

TEST_CASE("canonical and display forms") {
  CHECK(format_nuclide_id(Nuclide("Ac", 225)) == "225ac");
  CHECK(format_nuclide_id(Nuclide("Lu", 177, MetastableLevel{4})) == "177lu@m4");
  CHECK(format_nuclide_id(Nuclide("Pa", 234, MetastableLevel{1})) == "234pa@m");
  CHECK(format_nuclide_id(Nuclide("Lu", 177, EnergyLevel{970.1757})) == "177lu@970.1757");
  CHECK(display_name(Nuclide("Pa", 234, MetastableLevel{1})) == "Pa-234m");
  CHECK(display_name(Nuclide("U", 238)) == "U-238");
}

TEST_CASE("metastable equality ignores the resolved energy") {
  CHECK(Nuclide("Tc", 99, MetastableLevel{1, 142.68}) == Nuclide("Tc", 99, MetastableLevel{1}));
  CHECK(Nuclide("Tc", 99, MetastableLevel{1}) != Nuclide("Tc", 99));
  CHECK(Nuclide("Tc", 99, MetastableLevel{1}).level_erased() == Nuclide("Tc", 99));
  CHECK(Nuclide("Tc", 99).level_kev() == 0.0);
  CHECK(!Nuclide("Tc", 99, MetastableLevel{1}).level_kev().has_value());
}

TEST_CASE("element table") {
  CHECK(atomic_number("og") == 118);
  CHECK(atomic_number("H") == 1);
  CHECK(!atomic_number("Xq"));
  CHECK(element_symbol(92) == "U");
}

TEST_CASE("radiation types and decay modes") {
  CHECK(kAllRadiationTypes.size() == 6);
  for (auto r : kAllRadiationTypes) {
    CHECK(parse_radiation(radiation_code(r)) == r);
    CHECK(parse_radiation(radiation_name(r)) == r);
  }
  CHECK(parse_decay_mode("B-") == DecayMode::beta_minus);
  CHECK(parse_decay_mode("EC+B+") == DecayMode::beta_plus_ec);
  CHECK(parse_decay_mode("it") == DecayMode::it);
  CHECK(!parse_decay_mode("??"));
}

TEST_CASE("half-life units") {
  CHECK(seconds_per(TimeUnit::y) == doctest::Approx(365.2422 * 86400));
  CHECK(HalfLife::from_value(6.0067, TimeUnit::h).seconds() == doctest::Approx(21624.12));
  CHECK(HalfLife::stable().is_stable());
  CHECK_THROWS(HalfLife::from_seconds(0.0));
  CHECK_THROWS(HalfLife::from_seconds(1.0, -1.0));
  CHECK(parse_time_unit("min") == TimeUnit::m);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 140.511, 1e-7, 3.935693e16, 1.0 / 3.0}) CHECK(text::parse_double(text::format_double(v)) == v);
  CHECK(!text::parse_double("1.5x"));
  CHECK(!text::parse_double(""));
}
