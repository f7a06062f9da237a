#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ranpower/error.hpp"
#include "ranpower/units.hpp"
#include "support/gen.hpp"

using namespace ranpower;

TEST_CASE("dbm_to_watts reference points") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
  CHECK(dbm_to_watts(37.0) == doctest::Approx(5.011872336).epsilon(1e-9));
  CHECK(dbm_to_watts(46.0) == doctest::Approx(39.81071706).epsilon(1e-9));
  CHECK(dbm_to_watts(49.0) == doctest::Approx(79.43282347).epsilon(1e-9));
}

TEST_CASE("watts_to_dbm reference points") {
  CHECK(watts_to_dbm(1.0) == doctest::Approx(30.0));
  CHECK(watts_to_dbm(20.0) == doctest::Approx(43.01029996).epsilon(1e-9));
  CHECK(watts_to_dbm(4.5) == doctest::Approx(36.53212514).epsilon(1e-9));
}

TEST_CASE("watts_to_dbm rejects non-positive power") {
  for (double w : {0.0, -1.0, -1e-12}) {
    try {
      watts_to_dbm(w);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("dBm round trip and monotonicity") {
  gen::for_all(500, [](gen::Rng& rng) {
    const double dbm = rng.uniform(-30.0, 60.0);
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    const double w = rng.uniform(1e-6, 500.0);
    CHECK(dbm_to_watts(watts_to_dbm(w)) == doctest::Approx(w).epsilon(1e-12));
    const double d2 = dbm + rng.uniform(1e-3, 10.0);
    CHECK(dbm_to_watts(d2) > dbm_to_watts(dbm));
  });
}

TEST_CASE("3 dB is a factor of two") {
  gen::for_all(100, [](gen::Rng& rng) {
    const double dbm = rng.uniform(0.0, 50.0);
    CHECK(dbm_to_watts(dbm + 10.0 * std::log10(2.0)) == doctest::Approx(2.0 * dbm_to_watts(dbm)).epsilon(1e-12));
  });
}

TEST_CASE("error kind names") {
  CHECK(std::string(to_string(ErrorKind::Underdetermined)) == "under-determined");
  CHECK(std::string(to_string(ErrorKind::Infeasible)) == "infeasible");
}
