#pragma once

#include <map>
#include <optional>
#include <string>

#include "ranpower/dataset.hpp"
#include "ranpower/model.hpp"

namespace ranpower {

// Downlink data volume per unit energy, kbps/W. Throughput in Mb/s.
double energy_efficiency(double total_dl_mbps, double system_power_w);

// Half-up rounding used for every tabulated EE value.
long round_half_up(double value);

// Radiated RF over RU draw. Throws NonPhysical when rf exceeds the draw.
double ru_efficiency(double total_rf_w, double ru_power_w);

enum class EeBasis { Downlink, DownlinkPlusUplink };

struct EeReport {
  std::string label;
  double total_dl_mbps = 0.0;
  double total_ul_mbps = 0.0;
  PowerBreakdown breakdown;
  double ee_kbps_per_w = 0.0;  // raw, unrounded
  std::optional<double> ru_efficiency;
  std::map<BandId, double> per_band_dl_mbps;
  std::map<std::string, double> per_ru_dl_mbps;
  std::map<std::string, double> per_ru_rf_w;
  EeBasis basis = EeBasis::Downlink;

  long ee_rounded() const { return round_half_up(ee_kbps_per_w); }
};

// Builds the report from recorded values. Throws IncompleteRecord if any RU,
// DU or CU power reading is missing.
EeReport ee_report(const MeasurementRecord& record, EeBasis basis = EeBasis::Downlink);

// Report for a predicted scenario.
EeReport ee_report(const ScenarioConfig& scenario, const PowerBreakdown& predicted, std::string label = {});

struct ScenarioComparison {
  double throughput_ratio = 1.0;  // b / a
  double power_ratio = 1.0;       // b / a
  double ee_change_pct = 0.0;     // (ee_b - ee_a) / ee_a * 100
  double power_change_pct = 0.0;
};

ScenarioComparison compare_scenarios(const EeReport& a, const EeReport& b);

}  // namespace ranpower
