#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>

#include "ranpower/dataset.hpp"
#include "ranpower/error.hpp"
#include "ranpower/fixtures.hpp"
#include "support/gen.hpp"
#include "support/synthetic.hpp"

using namespace ranpower;

namespace {

const MeasurementRecord& fixture(const std::string& key) {
  for (const auto& r : embedded_fixtures().records)
    if (r.key() == key) return r;
  throw std::runtime_error("missing fixture " + key);
}

MeasurementRecord one_ru(double external, std::optional<double> self) {
  MeasurementRecord r;
  r.test_case_id = "x";
  RuMeasurement ru;
  ru.ru_id = "RU1";
  ru.ru_model_id = "TypeA";
  ru.external_power = external;
  ru.self_reported_power = self;
  r.per_ru.push_back(ru);
  return r;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("embedded fixtures") {
  const auto& ds = embedded_fixtures();
  const auto energy = std::count_if(ds.records.begin(), ds.records.end(), [](auto& r) { return r.group == "energy"; });
  const auto pathloss =
      std::count_if(ds.records.begin(), ds.records.end(), [](auto& r) { return r.group == "pathloss"; });
  CHECK(energy == 11);
  CHECK(pathloss == 3);

  const auto& tc1 = fixture("1");
  CHECK(tc1.total_dl_mbps() == 440);
  CHECK(*tc1.per_ru[0].rf_power == 18);
  CHECK(*tc1.per_ru[0].external_power == 268);
  CHECK(*tc1.du_server_power == 284);
  CHECK(*tc1.cu_power == 230);
  CHECK(*tc1.total_power == 782);

  const auto& n71 = ds.carrier(BandId("n71"));
  CHECK(n71.layers == 2);
  CHECK(n71.dl_bandwidth_mhz == 10);
  CHECK(n71.max_dl_mbps == 70);
  const auto& n70 = ds.carrier(BandId("n70"));
  CHECK(n70.layers == 4);
  CHECK(n70.max_ul_mbps == 57);
  CHECK(ds.carrier(BandId("n66")).is_sdl);

  const auto& tc33 = fixture("33");
  CHECK(*tc33.mcs == 15);
  CHECK(tc33.total_dl_mbps() == 225);
  CHECK(*tc33.total_power == 782);
  CHECK(ds.meta.external_meter_quantum_w == 5.0);
}

TEST_CASE("fixture totals match the component sums within 1 W") {
  for (const auto& rec : embedded_fixtures().records) {
    INFO("record " << rec.key());
    double sum = *rec.du_server_power + *rec.cu_power;
    for (const auto& ru : rec.per_ru) sum += *ru.external_power;
    CHECK(std::abs(sum - *rec.total_power) <= 1.0);
  }
}

TEST_CASE("loading from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "ranpower_test_dataset";
  std::filesystem::create_directories(dir);
  const auto json_path = dir / "fixtures.json";
  const auto csv_path = dir / "records.csv";
  const auto empty_path = dir / "empty.json";
  std::ofstream(json_path) << dataset_to_json(embedded_fixtures());
  std::ofstream(csv_path) << records_to_csv(embedded_fixtures().records);
  std::ofstream(empty_path) << "";

  const auto from_json = load_dataset(json_path);
  CHECK(from_json.records.size() == 14);
  const auto from_csv = load_dataset(csv_path);
  CHECK(from_csv.records.size() == 14);
  CHECK(kind_of([&] { load_dataset(empty_path); }) == ErrorKind::EmptyDataset);
  CHECK(kind_of([&] { load_dataset(dir / "missing.json"); }) == ErrorKind::Io);
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema violations name the offending field") {
  std::string text = dataset_to_json(embedded_fixtures());
  const std::string needle = "\"external_power\": 268";
  const auto at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), "\"external_power\": -268");
  CHECK(kind_of([&] { parse_dataset_json(text); }) == ErrorKind::Schema);
  CHECK(message_of([&] { parse_dataset_json(text); }).find("external_power") != std::string::npos);

  CHECK(kind_of([] { parse_dataset_json("{ \"records\": [ }"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_dataset_json("  \n"); }) == ErrorKind::EmptyDataset);

  Dataset dup = embedded_fixtures();
  dup.test_cases.push_back(dup.test_cases.front());
  CHECK(kind_of([&] { dup.validate(); }) == ErrorKind::Duplicate);
}

TEST_CASE("CSV reports unknown columns with their position") {
  const std::string text = "test_case_id,ru_id,bogus\n1,RU1,3\n";
  CHECK(kind_of([&] { parse_dataset_csv(text, embedded_fixtures()); }) == ErrorKind::Parse);
  const auto msg = message_of([&] { parse_dataset_csv(text, embedded_fixtures()); });
  CHECK(msg.find("line 1") != std::string::npos);
  CHECK(msg.find("column 20") != std::string::npos);
  CHECK(msg.find("bogus") != std::string::npos);
  CHECK(kind_of([] { parse_dataset_csv("", embedded_fixtures()); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("CSV round trip of the fixture records") {
  const std::string csv = records_to_csv(embedded_fixtures().records);
  const auto back = parse_dataset_csv(csv, embedded_fixtures());
  CHECK(records_to_csv(back.records) == csv);
  CHECK(back.records.size() == embedded_fixtures().records.size());
}

TEST_CASE("reconciliation") {
  auto flags = reconcile_power_sources(one_ru(268, 281));
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].checked);
  CHECK(flags[0].relative_error == doctest::Approx(0.0485).epsilon(1e-2));
  CHECK_FALSE(flags[0].flagged);

  flags = reconcile_power_sources(one_ru(200, 200));
  CHECK(flags[0].relative_error == 0.0);
  CHECK_FALSE(flags[0].flagged);

  flags = reconcile_power_sources(one_ru(200, 225));
  CHECK(flags[0].relative_error == doctest::Approx(0.125));
  CHECK(flags[0].flagged);

  flags = reconcile_power_sources(one_ru(200, std::nullopt));
  CHECK_FALSE(flags[0].checked);
  CHECK_FALSE(flags[0].flagged);

  // Flags exactly on the cases beyond 10%.
  for (const auto& [offset, expect] : std::vector<std::pair<double, bool>>{{0.05, false}, {0.09, false}, {0.11, true}, {0.15, true}}) {
    CHECK(reconcile_power_sources(one_ru(268, 268 * (1 + offset)))[0].flagged == expect);
    CHECK(reconcile_power_sources(one_ru(268, 268 * (1 - offset)))[0].flagged == expect);
  }
}

TEST_CASE("time series aggregation") {
  std::vector<PowerSample> flat;
  for (int t = 0; t < 60; ++t) flat.push_back({double(t), PowerSource::Server, 284});
  CHECK(aggregate_timeseries(flat, 0, 59) == doctest::Approx(284));

  std::vector<PowerSample> spike;
  for (int t = 0; t < 10; ++t) spike.push_back({double(t), PowerSource::External, t == 9 ? 1000.0 : 100.0});
  CHECK(aggregate_timeseries(spike, 0, 9) == doctest::Approx(100));

  std::vector<PowerSample> ramp;
  for (int t = 0; t <= 100; ++t) ramp.push_back({double(t), PowerSource::SelfReported, double(t)});
  CHECK(aggregate_timeseries(ramp, 0, 100) == doctest::Approx(50));

  CHECK(kind_of([&] { aggregate_timeseries(ramp, 200, 300); }) == ErrorKind::Domain);
  std::vector<PowerSample> backwards{{5, PowerSource::Pod, 1}, {4, PowerSource::Pod, 1}};
  CHECK(kind_of([&] { aggregate_timeseries(backwards, 0, 10); }) == ErrorKind::Schema);
}

TEST_CASE("property: reconcile flags do not depend on record order") {
  gen::for_all(100, [](gen::Rng& rng) {
    std::vector<MeasurementRecord> recs;
    const int n = rng.integer(1, 8);
    for (int i = 0; i < n; ++i) {
      const double ext = rng.uniform(50, 600);
      recs.push_back(one_ru(ext, rng.coin(0.8) ? std::optional<double>(ext * rng.uniform(0.7, 1.3)) : std::nullopt));
      recs.back().test_case_id = "r" + std::to_string(i);
    }
    std::map<std::string, bool> first;
    for (const auto& r : recs) first[r.key()] = reconcile_power_sources(r)[0].flagged;
    std::shuffle(recs.begin(), recs.end(), rng.engine());
    for (const auto& r : recs) CHECK(reconcile_power_sources(r)[0].flagged == first.at(r.key()));
  });
}

TEST_CASE("property: JSON load after save is the identity") {
  gen::for_all(100, [](gen::Rng& rng) {
    Dataset ds = gen::synthetic_dataset(rng).dataset;
    // Exercise optional fields the generator leaves empty.
    for (auto& rec : ds.records) {
      if (rng.coin()) rec.per_ru.front().self_reported_power = rng.uniform(50, 600);
      if (rng.coin(0.3)) rec.du_pod_power = rng.uniform(50, 300);
      if (rng.coin(0.3)) rec.mcs = rng.integer(0, 28);
      if (rng.coin(0.3)) rec.rsrp_dbm = {rng.uniform(-120, -60)};
    }
    const std::string text = dataset_to_json(ds);
    const Dataset back = parse_dataset_json(text);
    CHECK(dataset_to_json(back) == text);
    CHECK(back.records.size() == ds.records.size());
    CHECK(back.test_cases.size() == ds.test_cases.size());
  });
}

TEST_CASE("fixture JSON round trip") {
  const std::string text = dataset_to_json(embedded_fixtures());
  CHECK(dataset_to_json(parse_dataset_json(text)) == text);
}
