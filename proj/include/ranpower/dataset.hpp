#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ranpower/model.hpp"

namespace ranpower {

// One RF chain (band stage plus its PAs) of a radio product.
struct ChainSpec {
  BandId band;
  int n_tx = 4;
  double max_rating_dbm = 46.0;
  std::optional<double> disable_credit_per_chain;
};

// Hardware description of an RU product: which carriers it can radiate and
// which RF chain each carrier rides on.
struct RadioSpec {
  std::string model_id;
  std::vector<BandId> carriers;
  std::vector<ChainSpec> chains;
  std::map<BandId, BandId> shared_carriers;  // carrier -> chain, when not the same label

  BandId chain_of(const BandId& carrier) const;
};

enum class TrafficType { Tcp, Udp };
enum class PathlossClass { Low, Medium, High };

struct TestCarrier {
  BandId band;
  double dl_bandwidth_mhz = 0.0;
  double ul_bandwidth_mhz = 0.0;
};

struct TestCaseDefinition {
  std::string id;
  std::vector<std::string> radio_types;
  TrafficType traffic_type = TrafficType::Tcp;
  double dl_load_pct = 100.0;
  double ul_load_pct = 100.0;
  std::string direction = "DL & UL";
  int n_ues = 1;
  std::vector<TestCarrier> carriers;
  std::map<std::string, int> mimo;  // radio type -> layers
  double gain_dbm = 37.0;
  int n_cells = 1;
  int n_sectors = 1;
  PathlossClass pathloss = PathlossClass::Low;

  void validate() const;
};

struct BandThroughput {
  BandId band;
  double dl_mbps = 0.0;
  double ul_mbps = 0.0;
};

struct RuMeasurement {
  std::string ru_id;
  std::string ru_model_id;
  std::vector<BandThroughput> bands;
  std::optional<double> external_power;
  std::optional<double> self_reported_power;
  std::optional<double> rf_power;
};

struct MeasurementRecord {
  std::string test_case_id;
  std::string variant;          // distinguishes repeated runs of one test case
  std::string group = "energy";  // report table this row belongs to
  std::vector<RuMeasurement> per_ru;
  std::optional<double> du_server_power;
  std::optional<double> du_pod_power;
  std::optional<double> cu_power;
  std::optional<double> cu_utilization;
  std::optional<double> total_power;  // as tabulated, for cross-checking
  std::optional<int> mcs;
  std::vector<double> rsrp_dbm;

  std::string key() const;
  double total_dl_mbps() const;
  double total_ul_mbps() const;
  void validate() const;
};

// Zero-traffic RU reading with a given set of carriers switched on.
struct IdleMeasurement {
  std::string ru_model_id;
  std::set<BandId> active_bands;
  double measured_power = 0.0;
  std::string label;
};

struct DatasetMeta {
  double external_meter_quantum_w = 5.0;
};

struct Dataset {
  std::vector<CarrierSpec> carriers;
  std::vector<RadioSpec> radios;
  std::vector<TestCaseDefinition> test_cases;
  std::vector<MeasurementRecord> records;
  std::vector<IdleMeasurement> idle_observations;
  DatasetMeta meta;

  const CarrierSpec& carrier(const BandId& band) const;
  const RadioSpec& radio(const std::string& model_id) const;
  const TestCaseDefinition& test_case(const std::string& id) const;
  // Cross-reference and uniqueness checks; throws Schema / Duplicate.
  void validate() const;
};

// Carrier activations an RU ran with during a test case: the carriers it
// carried traffic on, at the test case's MIMO mode, Tx gain and DL load.
std::vector<CarrierActivation> activations_for(const Dataset& dataset, const TestCaseDefinition& test_case,
                                               const RuMeasurement& ru);

// The deployment a measurement record was taken under, for model replay.
ScenarioConfig scenario_for_record(const Dataset& dataset, const MeasurementRecord& record);

enum class DatasetFormat { Json, Csv };

// JSON datasets are self-contained. CSV datasets hold measurement records
// only, one row per (record, RU, band); carriers, radios and test-case
// definitions come from `definitions` (the embedded catalog by default).
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset load_dataset(const std::filesystem::path& path);  // format from extension
Dataset parse_dataset_json(const std::string& text);
Dataset parse_dataset_csv(const std::string& text, const Dataset& definitions);
std::string records_to_csv(const std::vector<MeasurementRecord>& records);
std::string dataset_to_json(const Dataset& dataset);

// --- measurement reconciliation -------------------------------------------

inline constexpr double kReconcileThreshold = 0.10;

struct ReconcileFlag {
  std::string ru_id;
  bool checked = false;  // false when the self-reported value is missing
  double external_power = 0.0;
  double self_reported_power = 0.0;
  double relative_error = 0.0;
  bool flagged = false;
};

// External meter is the reference; |self - external| / external > 10% flags.
std::vector<ReconcileFlag> reconcile_power_sources(const MeasurementRecord& record);

// --- time series -------------------------------------------------------------

enum class PowerSource { External, SelfReported, Server, Pod };

struct PowerSample {
  double timestamp_s = 0.0;
  PowerSource source = PowerSource::External;
  double value_w = 0.0;
};

// 10%-trimmed mean of the samples with start <= t <= end.
double aggregate_timeseries(const std::vector<PowerSample>& samples, double start_s, double end_s);

}  // namespace ranpower
