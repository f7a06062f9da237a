#include "ranpower/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "ranpower/error.hpp"
#include "ranpower/fixtures.hpp"
#include "ranpower/serialize.hpp"

namespace ranpower {

namespace {

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

void nonneg(const std::optional<double>& v, const std::string& field) {
  require(!v || (std::isfinite(*v) && *v >= 0.0), ErrorKind::Schema, field + " must be >= 0");
}

}  // namespace

BandId RadioSpec::chain_of(const BandId& carrier) const {
  if (auto it = shared_carriers.find(carrier); it != shared_carriers.end()) return it->second;
  return carrier;
}

void TestCaseDefinition::validate() const {
  const std::string where = "test case " + id + ": ";
  require(!id.empty(), ErrorKind::Schema, "test case id must be non-empty");
  require(dl_load_pct >= 0.0 && dl_load_pct <= 100.0, ErrorKind::Schema, where + "dl_load must be in [0, 100]");
  require(ul_load_pct >= 0.0 && ul_load_pct <= 100.0, ErrorKind::Schema, where + "ul_load must be in [0, 100]");
  require(n_ues >= 1, ErrorKind::Schema, where + "n_ues must be >= 1");
  require(!carriers.empty(), ErrorKind::Schema, where + "needs at least one carrier");
  for (const auto& [type, layers] : mimo) {
    require(layers >= 1, ErrorKind::Schema, where + "mimo layers for " + type + " must be >= 1");
  }
}

std::string MeasurementRecord::key() const { return variant.empty() ? test_case_id : test_case_id + "/" + variant; }

double MeasurementRecord::total_dl_mbps() const {
  double total = 0.0;
  for (const auto& ru : per_ru)
    for (const auto& b : ru.bands) total += b.dl_mbps;
  return total;
}

double MeasurementRecord::total_ul_mbps() const {
  double total = 0.0;
  for (const auto& ru : per_ru)
    for (const auto& b : ru.bands) total += b.ul_mbps;
  return total;
}

void MeasurementRecord::validate() const {
  require(!test_case_id.empty(), ErrorKind::Schema, "test_case_id must be non-empty");
  for (const auto& ru : per_ru) {
    const std::string where = "per_ru " + ru.ru_id + ": ";
    require(!ru.ru_id.empty(), ErrorKind::Schema, "ru_id must be non-empty");
    nonneg(ru.external_power, where + "external_power");
    nonneg(ru.self_reported_power, where + "self_reported_power");
    nonneg(ru.rf_power, where + "rf_power");
    for (const auto& b : ru.bands) {
      require(b.dl_mbps >= 0.0, ErrorKind::Schema, where + b.band.str() + " dl_throughput must be >= 0");
      require(b.ul_mbps >= 0.0, ErrorKind::Schema, where + b.band.str() + " ul_throughput must be >= 0");
    }
  }
  nonneg(du_server_power, "du_server_power");
  nonneg(du_pod_power, "du_pod_power");
  nonneg(cu_power, "cu_power");
  nonneg(total_power, "total_power");
  if (cu_utilization) {
    require(*cu_utilization >= 0.0 && *cu_utilization <= 100.0, ErrorKind::Schema,
            "cu_utilization must be in [0, 100]");
  }
}

const CarrierSpec& Dataset::carrier(const BandId& band) const {
  for (const auto& c : carriers)
    if (c.band == band) return c;
  throw Error(ErrorKind::Schema, "unknown carrier " + band.str());
}

const RadioSpec& Dataset::radio(const std::string& model_id) const {
  for (const auto& r : radios)
    if (r.model_id == model_id) return r;
  throw Error(ErrorKind::Schema, "unknown radio model " + model_id);
}

const TestCaseDefinition& Dataset::test_case(const std::string& id) const {
  for (const auto& tc : test_cases)
    if (tc.id == id) return tc;
  throw Error(ErrorKind::Schema, "unknown test case " + id);
}

void Dataset::validate() const {
  std::set<BandId> bands;
  for (const auto& c : carriers) {
    c.validate();
    require(bands.insert(c.band).second, ErrorKind::Duplicate, "duplicate carrier " + c.band.str());
  }
  for (const auto& c : carriers) {
    if (c.required_primary) {
      require(bands.count(*c.required_primary) == 1, ErrorKind::Schema,
              "carrier " + c.band.str() + " names unknown primary " + c.required_primary->str());
    }
  }
  std::set<std::string> models;
  for (const auto& r : radios) {
    require(models.insert(r.model_id).second, ErrorKind::Duplicate, "duplicate radio model " + r.model_id);
    std::set<BandId> chains;
    for (const auto& ch : r.chains) {
      require(chains.insert(ch.band).second, ErrorKind::Duplicate,
              "radio " + r.model_id + ": duplicate chain " + ch.band.str());
      require(ch.n_tx >= 1, ErrorKind::Schema, "radio " + r.model_id + ": n_tx must be >= 1");
    }
    for (const auto& b : r.carriers) {
      require(bands.count(b) == 1, ErrorKind::Schema, "radio " + r.model_id + ": unknown carrier " + b.str());
      require(chains.count(r.chain_of(b)) == 1, ErrorKind::Schema,
              "radio " + r.model_id + ": carrier " + b.str() + " has no chain");
    }
  }
  std::set<std::string> ids;
  for (const auto& tc : test_cases) {
    tc.validate();
    require(ids.insert(tc.id).second, ErrorKind::Duplicate, "duplicate test case id " + tc.id);
    for (const auto& c : tc.carriers) {
      require(bands.count(c.band) == 1, ErrorKind::Schema, "test case " + tc.id + ": unknown carrier " + c.band.str());
    }
  }
  std::set<std::string> keys;
  for (const auto& rec : records) {
    rec.validate();
    require(keys.insert(rec.key()).second, ErrorKind::Duplicate, "duplicate test_case_id " + rec.key());
    require(ids.count(rec.test_case_id) == 1, ErrorKind::Schema,
            "record " + rec.key() + " references unknown test case");
    std::set<std::string> ru_ids;
    for (const auto& ru : rec.per_ru) {
      require(ru_ids.insert(ru.ru_id).second, ErrorKind::Duplicate,
              "record " + rec.key() + ": duplicate RU " + ru.ru_id);
      require(models.count(ru.ru_model_id) == 1, ErrorKind::Schema,
              "record " + rec.key() + ": unknown radio model " + ru.ru_model_id);
      const auto& radio = this->radio(ru.ru_model_id);
      for (const auto& b : ru.bands) {
        require(std::find(radio.carriers.begin(), radio.carriers.end(), b.band) != radio.carriers.end(),
                ErrorKind::Schema,
                "record " + rec.key() + ": radio " + ru.ru_model_id + " has no carrier " + b.band.str());
      }
    }
  }
  for (const auto& o : idle_observations) {
    require(models.count(o.ru_model_id) == 1, ErrorKind::Schema,
            "idle observation " + o.label + ": unknown radio model " + o.ru_model_id);
    require(o.measured_power > 0.0, ErrorKind::Schema, "idle observation " + o.label + ": measured_power must be > 0");
    const auto& radio = this->radio(o.ru_model_id);
    for (const auto& b : o.active_bands) {
      require(std::find(radio.carriers.begin(), radio.carriers.end(), b) != radio.carriers.end(), ErrorKind::Schema,
              "idle observation " + o.label + ": radio " + o.ru_model_id + " has no carrier " + b.str());
    }
  }
  require(meta.external_meter_quantum_w >= 0.0, ErrorKind::Schema, "external_meter_quantum_w must be >= 0");
}

std::vector<CarrierActivation> activations_for(const Dataset& dataset, const TestCaseDefinition& test_case,
                                               const RuMeasurement& ru) {
  std::vector<CarrierActivation> out;
  for (const auto& b : ru.bands) {
    CarrierActivation act;
    act.carrier = dataset.carrier(b.band);
    act.tx_gain_dbm = test_case.gain_dbm;
    act.active_layers = act.carrier.layers;
    if (auto it = test_case.mimo.find(ru.ru_model_id); it != test_case.mimo.end()) {
      act.active_layers = std::min(it->second, act.carrier.layers);
    }
    act.dl_load = test_case.dl_load_pct / 100.0;
    out.push_back(std::move(act));
  }
  return out;
}

ScenarioConfig scenario_for_record(const Dataset& dataset, const MeasurementRecord& record) {
  const auto& tc = dataset.test_case(record.test_case_id);
  ScenarioConfig s;
  for (const auto& ru : record.per_ru) {
    RuActivation a;
    a.ru_id = ru.ru_id;
    a.ru_model_id = ru.ru_model_id;
    a.carriers = activations_for(dataset, tc, ru);
    s.rus.push_back(std::move(a));
  }
  s.n_rus_on_du = static_cast<int>(s.rus.size());
  s.cu_utilization = record.cu_utilization.value_or(0.0);
  return s;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  const std::string text = read_text_file(path);
  if (format == DatasetFormat::Csv) return parse_dataset_csv(text, embedded_fixtures());
  return parse_dataset_json(text);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return load_dataset(path, ext == ".csv" ? DatasetFormat::Csv : DatasetFormat::Json);
}

std::vector<ReconcileFlag> reconcile_power_sources(const MeasurementRecord& record) {
  std::vector<ReconcileFlag> out;
  for (const auto& ru : record.per_ru) {
    ReconcileFlag f;
    f.ru_id = ru.ru_id;
    if (ru.external_power && ru.self_reported_power && *ru.external_power > 0.0) {
      f.checked = true;
      f.external_power = *ru.external_power;
      f.self_reported_power = *ru.self_reported_power;
      f.relative_error = std::abs(f.self_reported_power - f.external_power) / f.external_power;
      f.flagged = f.relative_error > kReconcileThreshold;
    }
    out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const ReconcileFlag& a, const ReconcileFlag& b) { return a.ru_id < b.ru_id; });
  return out;
}

double aggregate_timeseries(const std::vector<PowerSample>& samples, double start_s, double end_s) {
  std::map<PowerSource, double> last;
  for (const auto& s : samples) {
    require(s.value_w >= 0.0, ErrorKind::Schema, "power sample value must be >= 0");
    auto [it, fresh] = last.emplace(s.source, s.timestamp_s);
    require(fresh || s.timestamp_s >= it->second, ErrorKind::Schema, "power sample timestamps must not decrease");
    it->second = s.timestamp_s;
  }
  std::vector<double> values;
  for (const auto& s : samples) {
    if (s.timestamp_s >= start_s && s.timestamp_s <= end_s) values.push_back(s.value_w);
  }
  if (values.empty()) throw Error(ErrorKind::Domain, "no samples inside the aggregation window");
  std::sort(values.begin(), values.end());
  const std::size_t trim = values.size() / 10;
  double sum = 0.0;
  for (std::size_t i = trim; i < values.size() - trim; ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - 2 * trim);
}

}  // namespace ranpower
