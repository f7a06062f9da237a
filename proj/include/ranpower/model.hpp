#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ranpower {

// Band / carrier label ("n70", "n66g", ...). Any non-empty label is accepted.
class BandId {
 public:
  BandId() = default;
  explicit BandId(std::string name);

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend auto operator<=>(const BandId&, const BandId&) = default;
  friend bool operator==(const BandId&, const BandId&) = default;

 private:
  std::string name_;
};

// Static capability of one carrier, as configured on a radio.
struct CarrierSpec {
  BandId band;
  double dl_bandwidth_mhz = 0.0;
  double ul_bandwidth_mhz = 0.0;
  int layers = 1;
  double max_dl_mbps = 0.0;
  double max_ul_mbps = 0.0;
  bool is_sdl = false;
  std::optional<BandId> required_primary;

  void validate() const;
};

struct EfficiencyPoint {
  double per_chain_tx_power_dbm = 0.0;
  double efficiency = 0.0;

  friend bool operator==(const EfficiencyPoint&, const EfficiencyPoint&) = default;
};

// PA efficiency as a function of per-chain drive level. Points are strictly
// increasing in dBm, efficiencies in (0, 1).
class EfficiencyCurve {
 public:
  EfficiencyCurve() = default;
  explicit EfficiencyCurve(std::vector<EfficiencyPoint> points);

  const std::vector<EfficiencyPoint>& points() const noexcept { return points_; }
  double min_efficiency() const;
  double max_efficiency() const;
  double max_power_dbm() const { return points_.back().per_chain_tx_power_dbm; }

  friend bool operator==(const EfficiencyCurve&, const EfficiencyCurve&) = default;

 private:
  std::vector<EfficiencyPoint> points_;
};

// Piecewise-linear in dBm between adjacent points, clamped to the end values.
double efficiency_at(const EfficiencyCurve& curve, double per_chain_power_dbm);

inline constexpr double kDefaultDisableCreditW = 15.0;

struct RfChainParams {
  BandId band;
  double idle_power = 0.0;
  int n_tx = 1;
  EfficiencyCurve efficiency;
  double max_rating_dbm = 0.0;
  double disable_credit_per_chain = kDefaultDisableCreditW;

  void validate() const;
};

struct RuPowerModel {
  std::string model_id;
  double base_power = 0.0;
  std::map<BandId, RfChainParams> chains;
  // Carriers that ride on another band's RF stage (e.g. two carriers sharing
  // one n66 stage). Carriers not listed here map to the chain of the same name.
  std::map<BandId, BandId> shared_carriers;

  // Resolves a carrier or chain label to its RF chain; throws MissingParameter.
  const RfChainParams& chain_for(const BandId& carrier) const;
  void validate() const;
};

// Affine RF output versus downlink load, measured at a reference layer count
// and Tx gain.
struct LoadRfCurve {
  double rf_overhead = 0.0;
  double rf_span = 0.0;
  int layers = 1;
  double gain_dbm = 0.0;

  double at(double load) const { return rf_overhead + load * rf_span; }
  void validate() const;
};

struct DuPowerModel {
  double idle_power = 0.0;
  double per_ru_idle_increment = 0.0;
  double throughput_slope = 0.0;  // W per Mb/s
  double pod_visibility_gap = 0.0;

  void validate() const;
};

struct CuPowerModel {
  double p_idle = 0.0;
  double p_max = 0.0;

  void validate() const;
};

struct CarrierActivation {
  CarrierSpec carrier;
  double tx_gain_dbm = 0.0;
  int active_layers = 1;
  double dl_load = 1.0;

  void validate() const;
  // Downlink throughput this activation serves, Mb/s. Capacity scales with
  // the fraction of the carrier's layers in use.
  double served_dl_mbps() const;
  double capacity_dl_mbps() const;
};

struct RuActivation {
  std::string ru_id;
  std::string ru_model_id;
  std::vector<CarrierActivation> carriers;
  std::map<BandId, int> disabled_chains;
};

struct ScenarioConfig {
  std::vector<RuActivation> rus;
  int n_rus_on_du = 0;
  double cu_utilization = 0.0;

  // Checks SDL pairing across the whole scenario and the RU count.
  void validate() const;
  double total_dl_mbps() const;
};

struct PowerBreakdown {
  std::map<std::string, double> per_ru;
  double ru_total = 0.0;
  double du = 0.0;
  double cu = 0.0;
  double system_total = 0.0;
  double total_rf = 0.0;
};

using LoadRfCurveTable = std::map<BandId, LoadRfCurve>;

struct ModelBundle {
  std::map<std::string, RuPowerModel, std::less<>> ru_models;
  DuPowerModel du_model;
  CuPowerModel cu_model;
  std::map<std::string, LoadRfCurveTable, std::less<>> load_rf_curves;

  const RuPowerModel& ru_model(std::string_view model_id) const;
  const LoadRfCurveTable* curves_for(std::string_view model_id) const;
  void validate() const;
};

}  // namespace ranpower
