#include "ranpower/fixtures.hpp"

#include <array>

#include "ranpower/error.hpp"

namespace ranpower {

namespace {

CarrierSpec carrier(const char* band, double dl_bw, double ul_bw, int layers, double max_dl, double max_ul,
                    const char* primary = nullptr) {
  CarrierSpec c;
  c.band = BandId(band);
  c.dl_bandwidth_mhz = dl_bw;
  c.ul_bandwidth_mhz = ul_bw;
  c.layers = layers;
  c.max_dl_mbps = max_dl;
  c.max_ul_mbps = max_ul;
  if (primary) {
    c.is_sdl = true;
    c.required_primary = BandId(primary);
  }
  return c;
}

TestCaseDefinition single(const std::string& id, TrafficType traffic, const char* band, double dl_bw, double ul_bw,
                          const char* radio, int mimo, double gain, double dl_load = 100.0,
                          const char* direction = "DL & UL") {
  TestCaseDefinition tc;
  tc.id = id;
  tc.radio_types = {radio};
  tc.traffic_type = traffic;
  tc.dl_load_pct = dl_load;
  tc.direction = direction;
  tc.n_ues = 64;
  tc.carriers = {{BandId(band), dl_bw, ul_bw}};
  tc.mimo = {{radio, mimo}};
  tc.gain_dbm = gain;
  return tc;
}

TestCaseDefinition multi(const std::string& id, TrafficType traffic, std::vector<TestCarrier> carriers,
                         std::vector<std::string> radios, double dl_load, int n_ues, int cells, int sectors) {
  TestCaseDefinition tc;
  tc.id = id;
  tc.radio_types = std::move(radios);
  tc.traffic_type = traffic;
  tc.dl_load_pct = dl_load;
  tc.n_ues = n_ues;
  tc.carriers = std::move(carriers);
  tc.mimo = {{"TypeA", 4}, {"TypeB", 2}};
  tc.gain_dbm = 37.0;
  tc.n_cells = cells;
  tc.n_sectors = sectors;
  return tc;
}

RuMeasurement ru(const std::string& id, const char* model, std::vector<std::pair<const char*, double>> dl,
                 std::optional<double> power, std::optional<double> rf) {
  RuMeasurement m;
  m.ru_id = id;
  m.ru_model_id = model;
  for (const auto& [band, mbps] : dl) m.bands.push_back({BandId(band), mbps, 0.0});
  m.external_power = power;
  m.rf_power = rf;
  return m;
}

MeasurementRecord record(const std::string& tc, std::vector<RuMeasurement> rus, double du, double cu, double total) {
  MeasurementRecord r;
  r.test_case_id = tc;
  r.per_ru = std::move(rus);
  r.du_server_power = du;
  r.cu_power = cu;
  r.total_power = total;
  return r;
}

// Six-RU, three-sector rows: the table gives one representative value per
// RU type, so the 2 W rounding gap to the "All RUs" column is spread over
// the Type-A RUs.
MeasurementRecord three_sector(const std::string& tc, const std::array<double, 3>& a_power, double a_rf,
                               double n70, double n66g, double b_power, double b_rf, double n71, double n29, double du,
                               double total) {
  std::vector<RuMeasurement> rus;
  for (int s = 0; s < 3; ++s) {
    const std::string sector = "-S" + std::to_string(s + 1);
    rus.push_back(ru("RU1" + sector, "TypeA", {{"n70", n70}, {"n66g", n66g}}, a_power[s], a_rf));
    rus.push_back(ru("RU2" + sector, "TypeB", {{"n71", n71}, {"n29", n29}}, b_power, b_rf));
  }
  return record(tc, std::move(rus), du, 230.0, total);
}

MeasurementRecord pathloss(const std::string& tc, const std::string& variant, double dl, int mcs,
                           std::vector<double> rsrp) {
  // Power columns follow the TC1 row; the pathloss table reports only the total.
  auto r = record(tc, {ru("RU1", "TypeA", {{"n70", dl}}, 268.0, std::nullopt)}, 284.0, 230.0, 782.0);
  r.variant = variant;
  r.group = "pathloss";
  r.mcs = mcs;
  r.rsrp_dbm = std::move(rsrp);
  return r;
}

Dataset build() {
  Dataset ds;
  ds.carriers = {
      carrier("n70", 25, 15, 4, 440, 57),
      carrier("n66g", 5, 5, 4, 62, 16),
      carrier("n66", 20, 0, 4, 350, 0, "n71"),
      carrier("n71", 10, 10, 2, 70, 37),
      carrier("n29", 5, 0, 2, 40, 0, "n71"),
  };

  RadioSpec a;
  a.model_id = "TypeA";
  a.carriers = {BandId("n70"), BandId("n66g"), BandId("n66")};
  a.chains = {{BandId("n70"), 4, 46.0, std::nullopt}, {BandId("n66g"), 4, 49.0, std::nullopt}};
  a.shared_carriers = {{BandId("n66"), BandId("n66g")}};
  RadioSpec b;
  b.model_id = "TypeB";
  b.carriers = {BandId("n71"), BandId("n29")};
  b.chains = {{BandId("n71"), 4, 46.0, std::nullopt}, {BandId("n29"), 4, 46.0, std::nullopt}};
  ds.radios = {a, b};

  const auto tcp = TrafficType::Tcp;
  const auto udp = TrafficType::Udp;
  ds.test_cases = {
      single("1", tcp, "n70", 25, 15, "TypeA", 4, 37),
      single("2", udp, "n70", 25, 15, "TypeA", 4, 37),
      single("3", tcp, "n70", 25, 15, "TypeA", 4, 40),
      single("4", tcp, "n70", 25, 15, "TypeA", 4, 43),
      single("5", tcp, "n70", 25, 15, "TypeA", 4, 46),
      single("6", tcp, "n70", 25, 15, "TypeA", 4, 37, 100.0, "DL"),
      single("7", tcp, "n70", 25, 15, "TypeA", 2, 37),
      single("8", tcp, "n70", 25, 15, "TypeA", 2, 43),
      single("17", tcp, "n70", 25, 15, "TypeA", 4, 37, 30.0),
      single("18", udp, "n70", 25, 15, "TypeA", 4, 37, 30.0),
      single("19", tcp, "n70", 25, 15, "TypeA", 4, 37, 50.0),
      single("20", udp, "n70", 25, 15, "TypeA", 4, 37, 50.0),
      single("9", tcp, "n66g", 5, 5, "TypeA", 4, 37),
      single("10", udp, "n66g", 5, 5, "TypeA", 4, 37),
      single("11", tcp, "n71", 10, 10, "TypeB", 2, 37),
      single("12", udp, "n71", 10, 10, "TypeB", 2, 37),
      single("13", tcp, "n71", 10, 10, "TypeB", 2, 37, 100.0, "DL"),
  };
  const TestCarrier n70{BandId("n70"), 25, 15}, n66g{BandId("n66g"), 5, 5}, n66{BandId("n66"), 20, 0},
      n71{BandId("n71"), 10, 10}, n29{BandId("n29"), 5, 0};
  ds.test_cases.push_back(multi("14", tcp, {n70, n66g}, {"TypeA"}, 100, 64, 2, 1));
  ds.test_cases.push_back(multi("15", tcp, {n70, n66g, n71}, {"TypeA", "TypeB"}, 100, 64, 3, 1));
  ds.test_cases.push_back(multi("16", udp, {n70, n66g, n71}, {"TypeA", "TypeB"}, 100, 64, 3, 1));
  ds.test_cases.push_back(multi("25", tcp, {n70, n66g, n71, n29}, {"TypeA", "TypeB"}, 50, 32, 4, 3));
  ds.test_cases.push_back(multi("27", tcp, {n70, n66g, n71, n29}, {"TypeA", "TypeB"}, 100, 32, 4, 3));
  ds.test_cases.push_back(multi("29", tcp, {n66, n66g, n71}, {"TypeA", "TypeB"}, 100, 32, 3, 1));
  ds.test_cases.push_back(multi("30", udp, {n66, n66g, n71}, {"TypeA", "TypeB"}, 100, 32, 3, 1));
  auto medium = single("33", tcp, "n70", 25, 15, "TypeA", 4, 37);
  medium.pathloss = PathlossClass::Medium;
  auto high = single("34", tcp, "n70", 25, 15, "TypeA", 4, 37);
  high.pathloss = PathlossClass::High;
  ds.test_cases.push_back(medium);
  ds.test_cases.push_back(high);

  ds.records = {
      record("1", {ru("RU1", "TypeA", {{"n70", 440}}, 268, 18)}, 284, 230, 782),
      record("19", {ru("RU1", "TypeA", {{"n70", 220}}, 248, 10)}, 285, 230, 763),
      record("17", {ru("RU1", "TypeA", {{"n70", 132}}, 234, 6)}, 282, 230, 746),
      record("7", {ru("RU1", "TypeA", {{"n70", 220}}, 236, 9)}, 282, 230, 748),
      record("9", {ru("RU1", "TypeA", {{"n66g", 62}}, 343, 15)}, 283, 230, 855),
      record("14", {ru("RU1", "TypeA", {{"n70", 440}, {"n66g", 62}}, 464, 33)}, 287, 230, 981),
      record("11", {ru("RU2", "TypeB", {{"n71", 70}}, 212, 8)}, 283, 230, 725),
      record("15",
             {ru("RU1", "TypeA", {{"n70", 440}, {"n66g", 62}}, 455, 33), ru("RU2", "TypeB", {{"n71", 70}}, 218, 8)},
             289, 230, 1192),
      record("29",
             {ru("RU1", "TypeA", {{"n66g", 62}, {"n66", 350}}, 418, 33), ru("RU2", "TypeB", {{"n71", 70}}, 200, 7)},
             283, 230, 1131),
      three_sector("27", {463, 464, 464}, 28, 440, 62, 292, 16, 70, 40, 304, 2802),
      three_sector("25", {433, 434, 434}, 21, 220, 31, 279, 13.5, 35, 20, 299, 2666),
      pathloss("1", "pathloss-low", 440, 27, {-65, -75}),
      pathloss("33", "", 225, 15, {-95}),
      pathloss("34", "", 75, 4, {-110}),
  };

  ds.idle_observations = {
      {"TypeA", {BandId("n70")}, 207, "n70 idle"},
      {"TypeA", {BandId("n66g")}, 236, "n66g idle"},
      {"TypeA", {BandId("n70"), BandId("n66g")}, 291, "n70+n66g idle"},
  };
  ds.meta.external_meter_quantum_w = 5.0;
  ds.validate();
  return ds;
}

}  // namespace

const Dataset& embedded_fixtures() {
  static const Dataset ds = build();
  return ds;
}

Inventory fixture_inventory() {
  const auto& ds = embedded_fixtures();
  Inventory inv;
  inv.carriers = ds.carriers;
  for (int i = 1; i <= 3; ++i) {
    inv.rus.push_back({"A" + std::to_string(i), "TypeA",
                       {{BandId("n70"), {4, 2}, {37.0}}, {BandId("n66g"), {4, 2}, {37.0}}}});
  }
  for (int i = 1; i <= 3; ++i) {
    inv.rus.push_back({"B" + std::to_string(i), "TypeB", {{BandId("n71"), {2}, {37.0}}, {BandId("n29"), {2}, {37.0}}}});
  }
  inv.du_max_rus = 6;
  return inv;
}

ScenarioConfig fixture_scenario(const std::string& record_key) {
  const auto& ds = embedded_fixtures();
  for (const auto& rec : ds.records) {
    if (rec.key() == record_key) return scenario_for_record(ds, rec);
  }
  throw Error(ErrorKind::Schema, "no fixture record " + record_key);
}

}  // namespace ranpower
