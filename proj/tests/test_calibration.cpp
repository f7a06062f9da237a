#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "ranpower/calibration.hpp"
#include "ranpower/error.hpp"
#include "ranpower/fixtures.hpp"
#include "ranpower/predict.hpp"
#include "support/synthetic.hpp"

using namespace ranpower;

namespace {

IdleObservation idle(std::initializer_list<const char*> bands, double p) {
  IdleObservation o;
  for (const char* b : bands) o.active_bands.insert(BandId(b));
  o.measured_power = p;
  return o;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("idle decomposition of the Type-A readings") {
  const std::vector<IdleObservation> obs{idle({"n70"}, 207), idle({"n66g"}, 236), idle({"n70", "n66g"}, 291)};
  const auto fit = fit_idle_powers(obs);
  CHECK(fit.base_power == doctest::Approx(152).epsilon(1e-12));
  CHECK(fit.per_band_idle.at(BandId("n70")) == doctest::Approx(55).epsilon(1e-12));
  CHECK(fit.per_band_idle.at(BandId("n66g")) == doctest::Approx(84).epsilon(1e-12));
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("idle decomposition rejects under-determined input") {
  const std::vector<IdleObservation> one{idle({"A"}, 100)};
  CHECK_THROWS_AS(fit_idle_powers(one), UnderdeterminedError);
  // Two readings that always switch A and B together cannot split them.
  const std::vector<IdleObservation> tied{idle({"A", "B"}, 100), idle({"A", "B"}, 101), idle({}, 50)};
  try {
    fit_idle_powers(tied);
    FAIL("expected under-determined");
  } catch (const UnderdeterminedError& e) {
    CHECK(e.parameters() == std::vector<std::string>{"A", "B"});
  }
}

TEST_CASE("idle decomposition credits disabled chains") {
  auto a = idle({"A"}, 185);
  a.disabled_chains[BandId("A")] = 1;  // one chain off saves 15 W
  const std::vector<IdleObservation> obs{a, idle({"B"}, 150), idle({"A", "B"}, 250)};
  const auto fit = fit_idle_powers(obs, 15.0);
  CHECK(fit.base_power == doctest::Approx(100));
  CHECK(fit.per_band_idle.at(BandId("A")) == doctest::Approx(100));
}

TEST_CASE("synthetic 3-band idle system with 7 subsets") {
  const double base = 131.5, a = 17.25, b = 44.0, c = 92.125;
  std::vector<IdleObservation> obs;
  for (int mask = 1; mask < 8; ++mask) {
    IdleObservation o;
    double p = base;
    if (mask & 1) o.active_bands.insert(BandId("a")), p += a;
    if (mask & 2) o.active_bands.insert(BandId("b")), p += b;
    if (mask & 4) o.active_bands.insert(BandId("c")), p += c;
    o.measured_power = p;
    obs.push_back(o);
  }
  const auto fit = fit_idle_powers(obs);
  CHECK(std::abs(fit.base_power - base) < 1e-9);
  CHECK(std::abs(fit.per_band_idle.at(BandId("a")) - a) < 1e-9);
  CHECK(std::abs(fit.per_band_idle.at(BandId("b")) - b) < 1e-9);
  CHECK(std::abs(fit.per_band_idle.at(BandId("c")) - c) < 1e-9);
}

TEST_CASE("PA efficiency from single-band loaded readings") {
  LoadedObservation tc1;
  tc1.active_bands = {BandId("n70")};
  tc1.per_band_rf_power[BandId("n70")] = 18;
  tc1.measured_power = 268;
  CHECK(estimate_pa_efficiency(tc1, 207) == doctest::Approx(18.0 / 61.0));
  CHECK(estimate_pa_efficiency(tc1, 207) == doctest::Approx(0.295).epsilon(0.01));

  LoadedObservation tc9;
  tc9.active_bands = {BandId("n66g")};
  tc9.per_band_rf_power[BandId("n66g")] = 15;
  tc9.measured_power = 343;
  CHECK(estimate_pa_efficiency(tc9, 236) == doctest::Approx(15.0 / 107.0));

  LoadedObservation zero = tc1;
  zero.per_band_rf_power[BandId("n70")] = 0;
  CHECK_THROWS_AS(estimate_pa_efficiency(zero, 207), Error);

  LoadedObservation two = tc1;
  two.active_bands.insert(BandId("n66g"));
  two.per_band_rf_power[BandId("n66g")] = 15;
  try {
    estimate_pa_efficiency(two, 291);
    FAIL("expected ambiguity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousAttribution);
  }
  CHECK_THROWS_AS(estimate_pa_efficiency(tc1, 300), Error);
}

TEST_CASE("efficiency curve fitting") {
  const std::vector<std::pair<double, double>> three{{43, 0.39}, {37, 0.29}, {40, 0.33}};
  const auto c = fit_efficiency_curve(three);
  REQUIRE(c.points().size() == 3);
  CHECK(c.points()[0] == EfficiencyPoint{37, 0.29});
  CHECK(c.points()[2] == EfficiencyPoint{43, 0.39});
  const std::vector<std::pair<double, double>> one{{37, 0.29}};
  CHECK(fit_efficiency_curve(one).points().size() == 1);
  const std::vector<std::pair<double, double>> dup{{40, 0.32}, {40, 0.34}};
  const auto d = fit_efficiency_curve(dup);
  REQUIRE(d.points().size() == 1);
  CHECK(d.points()[0].efficiency == doctest::Approx(0.33));
  const std::vector<std::pair<double, double>> bad{{40, 1.2}};
  CHECK_THROWS_AS(fit_efficiency_curve(bad), Error);
}

TEST_CASE("load to RF line") {
  // Least squares over (1, 18), (0.5, 10), (0.3, 6): Sxy / Sxx = 4.4 / 0.26.
  const std::vector<std::pair<double, double>> s{{1.0, 18}, {0.5, 10}, {0.3, 6}};
  const auto c = fit_load_rf_curve(s);
  CHECK(c.rf_span == doctest::Approx(16.923077).epsilon(1e-6));
  CHECK(c.rf_overhead == doctest::Approx(1.179487).epsilon(1e-6));
  CHECK(c.at(0.5) == doctest::Approx(9.641026).epsilon(1e-6));

  const std::vector<std::pair<double, double>> flat{{0, 5}, {1, 5}};
  const auto f = fit_load_rf_curve(flat);
  CHECK(f.rf_overhead == doctest::Approx(5));
  CHECK(f.rf_span == doctest::Approx(0).epsilon(1e-12));

  const std::vector<std::pair<double, double>> same_load{{0.5, 10}, {0.5, 12}};
  CHECK_THROWS_AS(fit_load_rf_curve(same_load), UnderdeterminedError);

  // A negative intercept is refit through the origin.
  const std::vector<std::pair<double, double>> steep{{0.5, 4}, {1.0, 12}};
  const auto z = fit_load_rf_curve(steep);
  CHECK(z.rf_overhead == 0.0);
  CHECK(z.rf_span == doctest::Approx((0.5 * 4 + 12) / 1.25));
}

TEST_CASE("DU fit") {
  SUBCASE("constant power") {
    const std::vector<DuSample> s{{1, 100, 284}, {2, 300, 284}, {6, 1000, 284}};
    const auto m = fit_du_model(s);
    CHECK(m.idle_power == doctest::Approx(284));
    CHECK(m.throughput_slope == doctest::Approx(0).epsilon(1e-12));
    CHECK(m.per_ru_idle_increment == doctest::Approx(0).epsilon(1e-12));
  }
  SUBCASE("pod visibility gap") {
    const std::vector<DuSample> s{{1, 100, 284}, {1, 200, 285}, {1, 300, 286}};
    const std::vector<PodSample> pods{{284, 154}, {300, 170}};
    const auto m = fit_du_model(s, pods);
    CHECK(m.pod_visibility_gap == doctest::Approx(130));
    CHECK(m.throughput_slope == doctest::Approx(0.01));
  }
  SUBCASE("fixture DU column") {
    std::vector<DuSample> s;
    for (const auto& rec : embedded_fixtures().records) {
      s.push_back({static_cast<int>(rec.per_ru.size()), rec.total_dl_mbps(), *rec.du_server_power});
    }
    const auto m = fit_du_model(s);
    CHECK(m.idle_power == doctest::Approx(279.98).epsilon(1e-3));
    CHECK(m.per_ru_idle_increment == doctest::Approx(2.260).epsilon(1e-3));
    CHECK(m.throughput_slope == doctest::Approx(0.00557).epsilon(1e-2));
    CHECK(predict_du_power(m, 6, 1836) == doctest::Approx(304).epsilon(0.01));
    CHECK(predict_du_power(m, 2, 572) == doctest::Approx(289).epsilon(0.01));
  }
  SUBCASE("too few samples") {
    const std::vector<DuSample> s{{1, 100, 284}};
    CHECK_THROWS_AS(fit_du_model(s), UnderdeterminedError);
  }
}

TEST_CASE("calibrating the embedded fixtures") {
  const auto report = calibrate_from_dataset(embedded_fixtures());
  const auto& a = report.bundle.ru_model("TypeA");
  CHECK(a.base_power == doctest::Approx(152).epsilon(0.5 / 152));
  CHECK(a.chains.at(BandId("n70")).idle_power == doctest::Approx(55).epsilon(0.5 / 55));
  CHECK(a.chains.at(BandId("n66g")).idle_power == doctest::Approx(84).epsilon(0.5 / 84));
  // Type-B has no zero-traffic readings.
  CHECK(contains(report.underdetermined, "TypeB.base_power"));
  CHECK(contains(report.underdetermined, "TypeB.n71.idle_power"));
  CHECK_FALSE(contains(report.underdetermined, "TypeA.base_power"));
  for (const auto& r : report.residuals) {
    if (r.fitter == "TypeA.idle") CHECK(std::abs(r.residual) < 1e-9);
  }
}

TEST_CASE("Type-A-only measurement set is fully determined") {
  Dataset ds = embedded_fixtures();
  ds.records.erase(std::remove_if(ds.records.begin(), ds.records.end(),
                                  [](const MeasurementRecord& r) {
                                    return std::any_of(r.per_ru.begin(), r.per_ru.end(),
                                                       [](auto& ru) { return ru.ru_model_id != "TypeA"; });
                                  }),
                   ds.records.end());
  ds.radios.erase(std::remove_if(ds.radios.begin(), ds.radios.end(), [](auto& r) { return r.model_id != "TypeA"; }),
                  ds.radios.end());
  ds.test_cases.erase(std::remove_if(ds.test_cases.begin(), ds.test_cases.end(),
                                     [](auto& tc) {
                                       return std::find(tc.radio_types.begin(), tc.radio_types.end(), "TypeB") !=
                                              tc.radio_types.end();
                                     }),
                      ds.test_cases.end());
  const auto report = calibrate_from_dataset(ds);
  CHECK(report.underdetermined.empty());
  CHECK(report.bundle.ru_model("TypeA").base_power == doctest::Approx(152));
}

TEST_CASE("empty dataset") {
  Dataset ds;
  try {
    calibrate_from_dataset(ds);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyDataset);
  }
}

// --- properties -------------------------------------------------------------

TEST_CASE("property: forward generation then calibration recovers the bundle") {
  gen::for_all(100, [](gen::Rng& rng) {
    const auto syn = gen::synthetic_dataset(rng);
    const auto report = calibrate_from_dataset(syn.dataset);
    CHECK(report.underdetermined.empty());
    CHECK(gen::recovery_error(syn.truth, report.bundle) <= 1e-6);
    CHECK(report.max_abs_residual() < 1e-6);
  });
}

TEST_CASE("property: a redundant consistent idle reading leaves the solution unchanged") {
  gen::for_all(100, [](gen::Rng& rng) {
    const double base = rng.uniform(50, 250), a = rng.uniform(5, 120), b = rng.uniform(5, 120);
    std::vector<IdleObservation> obs{idle({"a"}, base + a), idle({"b"}, base + b), idle({"a", "b"}, base + a + b)};
    const auto first = fit_idle_powers(obs);
    obs.push_back(rng.coin() ? idle({"a"}, base + a) : idle({"a", "b"}, base + a + b));
    const auto second = fit_idle_powers(obs);
    CHECK(second.base_power == doctest::Approx(first.base_power).epsilon(1e-12));
    CHECK(second.per_band_idle.at(BandId("a")) == doctest::Approx(first.per_band_idle.at(BandId("a"))).epsilon(1e-12));
    for (double r : second.residuals) CHECK(std::abs(r) < 1e-9);
  });
}

TEST_CASE("property: estimating efficiency from a forward prediction returns the efficiency") {
  gen::for_all(300, [](gen::Rng& rng) {
    auto m = gen::ru_model(rng, "X", {"b"});
    const double eta = rng.uniform(0.05, 0.6);
    m.chains.at(BandId("b")).efficiency = EfficiencyCurve({{30.0, eta}});
    CarrierActivation act;
    act.carrier = gen::carrier("b", 4, 100);
    act.active_layers = rng.integer(1, 4);
    act.tx_gain_dbm = rng.uniform(20, 40);
    act.dl_load = rng.uniform(0.05, 1.0);
    const std::vector<CarrierActivation> acts{act};
    const auto pred = predict_ru(m, acts);
    LoadedObservation obs;
    obs.active_bands = {BandId("b")};
    obs.per_band_rf_power[BandId("b")] = pred.rf;
    obs.measured_power = pred.power;
    CHECK(std::abs(estimate_pa_efficiency(obs, pred.idle) - eta) < 1e-9);
  });
}
