#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "ranpower/calibration.hpp"
#include "ranpower/cli.hpp"
#include "ranpower/fixtures.hpp"
#include "ranpower/serialize.hpp"

using namespace ranpower;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class Workdir {
 public:
  Workdir() : path_(fs::temp_directory_path() / "ranpower_test_cli") {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Workdir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

Dataset type_a_only() {
  Dataset ds = embedded_fixtures();
  auto uses_b = [](const MeasurementRecord& r) {
    return std::any_of(r.per_ru.begin(), r.per_ru.end(), [](auto& ru) { return ru.ru_model_id != "TypeA"; });
  };
  ds.records.erase(std::remove_if(ds.records.begin(), ds.records.end(), uses_b), ds.records.end());
  ds.radios.erase(std::remove_if(ds.radios.begin(), ds.radios.end(), [](auto& r) { return r.model_id != "TypeA"; }),
                  ds.radios.end());
  ds.test_cases.erase(std::remove_if(ds.test_cases.begin(), ds.test_cases.end(),
                                     [](auto& tc) {
                                       return std::find(tc.radio_types.begin(), tc.radio_types.end(), "TypeB") !=
                                              tc.radio_types.end();
                                     }),
                      ds.test_cases.end());
  return ds;
}

}  // namespace

TEST_CASE("calibrate") {
  Workdir dir;
  write_text_file(dir / "a.json", dataset_to_json(type_a_only()));
  const auto ok = run({"calibrate", dir / "a.json", "--out", dir / "model.json", "--format", "json"});
  CHECK(ok.code == 0);
  const auto bundle = parse_bundle_json(read_text_file(dir / "model.json"));
  CHECK(bundle.ru_model("TypeA").base_power == doctest::Approx(152).epsilon(0.5 / 152));

  const auto partial = run({"calibrate", "--fixtures", "--out", dir / "full.json", "--report", dir / "report.json"});
  CHECK(partial.code == 2);
  CHECK(partial.err.find("TypeB.base_power") != std::string::npos);
  CHECK(fs::exists(dir / "full.json"));
  CHECK(fs::exists(dir / "report.json"));

  CHECK(run({"calibrate", dir / "missing.json"}).code == 1);
  CHECK(run({"calibrate"}).code == 1);
  CHECK(run({"calibrate", "--fixtures", dir / "a.json"}).code == 1);
}

TEST_CASE("predict") {
  Workdir dir;
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m.json"}).code == 2);
  const auto tc27 = run({"predict", "--model", dir / "m.json", "--record", "27", "--format", "json"});
  CHECK(tc27.code == 0);
  CHECK(tc27.out.find("\"system_total\"") != std::string::npos);

  write_text_file(dir / "s7.json", scenario_to_json(fixture_scenario("7")));
  const auto tc7 = run({"predict", "--model", dir / "m.json", "--scenario", dir / "s7.json", "--format", "csv"});
  CHECK(tc7.code == 0);
  CHECK(tc7.out.find("ru RU1 power_w") != std::string::npos);

  write_text_file(dir / "empty.json", scenario_to_json(ScenarioConfig{}));
  const auto empty = run({"predict", "--model", dir / "m.json", "--scenario", dir / "empty.json"});
  CHECK(empty.code == 0);

  // n66 without its primary on the scenario.
  ScenarioConfig bad = fixture_scenario("29");
  for (auto& ru : bad.rus) {
    ru.carriers.erase(std::remove_if(ru.carriers.begin(), ru.carriers.end(),
                                     [](auto& a) { return a.carrier.band.str() == "n71"; }),
                      ru.carriers.end());
  }
  bad.rus.erase(std::remove_if(bad.rus.begin(), bad.rus.end(), [](auto& r) { return r.carriers.empty(); }),
                bad.rus.end());
  bad.n_rus_on_du = static_cast<int>(bad.rus.size());
  write_text_file(dir / "bad.json", scenario_to_json(bad));
  const auto sdl = run({"predict", "--model", dir / "m.json", "--scenario", dir / "bad.json"});
  CHECK(sdl.code == 1);
  CHECK(sdl.err.find("n66") != std::string::npos);
}

TEST_CASE("report") {
  const auto energy = run({"report", "--fixtures", "--format", "csv"});
  CHECK(energy.code == 0);
  const auto lines = csv_lines(energy.out);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0].rfind("test_case,", 0) == 0);
  CHECK(lines[0].substr(lines[0].size() - 3) == ",ee");
  CHECK(lines[1].substr(lines[1].size() - 4) == ",563");

  const auto pathloss = run({"report", "--fixtures", "--group", "pathloss", "--format", "csv"});
  CHECK(pathloss.code == 0);
  const auto pl = csv_lines(pathloss.out);
  REQUIRE(pl.size() == 4);
  CHECK(pl[1].substr(pl[1].size() - 4) == ",563");
  CHECK(pl[2].substr(pl[2].size() - 4) == ",288");
  CHECK(pl[3].substr(pl[3].size() - 3) == ",96");

  Workdir dir;
  Dataset empty = embedded_fixtures();
  empty.records.clear();
  write_text_file(dir / "empty.json", dataset_to_json(empty));
  const auto header_only = run({"report", dir / "empty.json", "--format", "csv"});
  CHECK(header_only.code == 0);
  CHECK(csv_lines(header_only.out).size() == 1);

  Dataset gap = embedded_fixtures();
  gap.records[0].cu_power.reset();
  write_text_file(dir / "gap.json", dataset_to_json(gap));
  const auto skipped = run({"report", dir / "gap.json", "--format", "csv"});
  CHECK(skipped.code == 2);
  CHECK(csv_lines(skipped.out).size() == 11);
  CHECK(!skipped.err.empty());
}

TEST_CASE("validate") {
  Workdir dir;
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m.json"}).code == 2);
  const auto pass = run({"validate", "--fixtures", "--model", dir / "m.json", "--tolerance", "10"});
  CHECK(pass.code == 0);
  CHECK(count(pass.out, "PASS") == 14);

  CHECK(run({"validate", "--fixtures", "--model", dir / "m.json", "--tolerance", "0"}).code == 2);

  ModelBundle zeroed = parse_bundle_json(read_text_file(dir / "m.json"));
  for (auto& [id, m] : zeroed.ru_models)
    for (auto& [band, chain] : m.chains) chain.efficiency = EfficiencyCurve({{30.0, 1e-6}});
  write_text_file(dir / "z.json", bundle_to_json(zeroed));
  const auto fail = run({"validate", "--fixtures", "--model", dir / "z.json", "--format", "csv"});
  CHECK(fail.code == 2);
  CHECK(count(fail.out, "FAIL") == 14);
}

TEST_CASE("plan") {
  Workdir dir;
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m.json"}).code == 2);
  const auto p500 = run({"plan", "--model", dir / "m.json", "--fixtures", "--demand", "500"});
  CHECK(p500.code == 0);
  CHECK(p500.out.find("A1[n70:4L@37,n66g:4L@37]") != std::string::npos);
  const auto p0 = run({"plan", "--model", dir / "m.json", "--fixtures", "--demand", "0"});
  CHECK(p0.code == 0);
  CHECK(p0.out.find("plan off") != std::string::npos);
  const auto big = run({"plan", "--model", dir / "m.json", "--fixtures", "--demand", "10000"});
  CHECK(big.code == 3);
  CHECK(big.err.find("1836") != std::string::npos);
  CHECK(run({"plan", "--model", dir / "m.json", "--fixtures", "--demand", "-5"}).code == 1);
  CHECK(run({"plan", "--model", dir / "m.json", "--demand", "5"}).code == 1);
}

TEST_CASE("plotdata") {
  Workdir dir;
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m.json"}).code == 2);
  auto sweep = [&](const std::string& band) {
    return run({"plotdata", "--model", dir / "m.json", "--ru-model", "TypeA", "--band", band, "--sweep", "rf_power",
                "--from", "0", "--to", "20", "--steps", "21"});
  };
  const auto n70 = sweep("n70");
  CHECK(n70.code == 0);
  auto lines = csv_lines(n70.out);
  REQUIRE(lines.size() == 22);
  CHECK(lines[0] == "rf_power_w,ru_power_w");
  const double at0 = std::stod(lines[1].substr(lines[1].find(',') + 1));
  const double at20 = std::stod(lines[21].substr(lines[21].find(',') + 1));
  CHECK(at0 == doctest::Approx(207).epsilon(0.01));
  const auto n66g = sweep("n66g");
  lines = csv_lines(n66g.out);
  const double g0 = std::stod(lines[1].substr(lines[1].find(',') + 1));
  const double g20 = std::stod(lines[21].substr(lines[21].find(',') + 1));
  CHECK((g20 - g0) > (at20 - at0));

  const auto none = run({"plotdata", "--model", dir / "m.json", "--ru-model", "TypeA", "--band", "n70", "--sweep",
                         "rf_power", "--steps", "0"});
  CHECK(none.code == 0);
  CHECK(csv_lines(none.out).size() == 1);
  CHECK(run({"plotdata", "--model", dir / "m.json", "--ru-model", "TypeA", "--band", "n70", "--sweep", "bogus"}).code ==
        1);
}

TEST_CASE("usage errors and help") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"report", "--fixtures", "--format", "xml"}).code == 1);
}

TEST_CASE("repeated invocations produce identical output") {
  Workdir dir;
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m1.json", "--report", dir / "r1.json"}).code == 2);
  REQUIRE(run({"calibrate", "--fixtures", "--out", dir / "m2.json", "--report", dir / "r2.json"}).code == 2);
  CHECK(read_text_file(dir / "m1.json") == read_text_file(dir / "m2.json"));
  CHECK(read_text_file(dir / "r1.json") == read_text_file(dir / "r2.json"));
  const std::vector<std::vector<std::string>> commands{
      {"report", "--fixtures", "--format", "json"},
      {"predict", "--model", dir / "m1.json", "--record", "15"},
      {"validate", "--fixtures", "--model", dir / "m1.json"},
      {"plan", "--model", dir / "m1.json", "--fixtures", "--demand", "700", "--format", "json"},
  };
  for (const auto& args : commands) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
