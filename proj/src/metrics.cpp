#include "ranpower/metrics.hpp"

#include <cmath>

#include "ranpower/error.hpp"

namespace ranpower {

double energy_efficiency(double total_dl_mbps, double system_power_w) {
  if (!(system_power_w > 0.0)) {
    throw Error(ErrorKind::Domain, "energy efficiency needs positive system power");
  }
  return total_dl_mbps * 1000.0 / system_power_w;
}

long round_half_up(double value) { return static_cast<long>(std::floor(value + 0.5)); }

double ru_efficiency(double total_rf_w, double ru_power_w) {
  if (!(ru_power_w > 0.0) || total_rf_w < 0.0) {
    throw Error(ErrorKind::Domain, "RU efficiency needs ru_power > 0 and rf >= 0");
  }
  if (total_rf_w > ru_power_w) {
    throw Error(ErrorKind::NonPhysical, "radiated power exceeds RU power draw");
  }
  return total_rf_w / ru_power_w;
}

EeReport ee_report(const MeasurementRecord& record, EeBasis basis) {
  const std::string key = record.key();
  auto missing = [&](const std::string& what) {
    return Error(ErrorKind::IncompleteRecord, "record " + key + ": missing " + what);
  };
  EeReport out;
  out.label = key;
  out.basis = basis;
  bool rf_complete = !record.per_ru.empty();
  for (const auto& ru : record.per_ru) {
    if (!ru.external_power) throw missing("power for RU " + ru.ru_id);
    out.breakdown.per_ru[ru.ru_id] = *ru.external_power;
    double ru_dl = 0.0;
    for (const auto& b : ru.bands) {
      out.per_band_dl_mbps[b.band] += b.dl_mbps;
      ru_dl += b.dl_mbps;
      out.total_ul_mbps += b.ul_mbps;
    }
    out.per_ru_dl_mbps[ru.ru_id] = ru_dl;
    out.total_dl_mbps += ru_dl;
    if (ru.rf_power) {
      out.per_ru_rf_w[ru.ru_id] = *ru.rf_power;
      out.breakdown.total_rf += *ru.rf_power;
    } else {
      rf_complete = false;
    }
  }
  if (!record.du_server_power) throw missing("DU server power");
  if (!record.cu_power) throw missing("CU power");
  for (const auto& [id, watts] : out.breakdown.per_ru) out.breakdown.ru_total += watts;
  out.breakdown.du = *record.du_server_power;
  out.breakdown.cu = *record.cu_power;
  out.breakdown.system_total = out.breakdown.ru_total + out.breakdown.du + out.breakdown.cu;

  const double volume = basis == EeBasis::Downlink ? out.total_dl_mbps : out.total_dl_mbps + out.total_ul_mbps;
  out.ee_kbps_per_w = energy_efficiency(volume, out.breakdown.system_total);
  if (rf_complete && out.breakdown.ru_total > 0.0) {
    out.ru_efficiency = ru_efficiency(out.breakdown.total_rf, out.breakdown.ru_total);
  }
  return out;
}

EeReport ee_report(const ScenarioConfig& scenario, const PowerBreakdown& predicted, std::string label) {
  EeReport out;
  out.label = std::move(label);
  out.breakdown = predicted;
  for (const auto& ru : scenario.rus) {
    double ru_dl = 0.0;
    for (const auto& act : ru.carriers) {
      const double dl = act.served_dl_mbps();
      out.per_band_dl_mbps[act.carrier.band] += dl;
      ru_dl += dl;
    }
    out.per_ru_dl_mbps[ru.ru_id] = ru_dl;
    out.total_dl_mbps += ru_dl;
  }
  out.ee_kbps_per_w = energy_efficiency(out.total_dl_mbps, predicted.system_total);
  if (predicted.ru_total > 0.0) out.ru_efficiency = ru_efficiency(predicted.total_rf, predicted.ru_total);
  return out;
}

ScenarioComparison compare_scenarios(const EeReport& a, const EeReport& b) {
  if (!(a.breakdown.system_total > 0.0) || !(b.breakdown.system_total > 0.0)) {
    throw Error(ErrorKind::Domain, "scenario comparison needs positive power on both sides");
  }
  ScenarioComparison out;
  out.throughput_ratio = a.total_dl_mbps > 0.0 ? b.total_dl_mbps / a.total_dl_mbps
                                               : (b.total_dl_mbps > 0.0 ? INFINITY : 1.0);
  out.power_ratio = b.breakdown.system_total / a.breakdown.system_total;
  out.power_change_pct = (out.power_ratio - 1.0) * 100.0;
  if (a.ee_kbps_per_w > 0.0) {
    out.ee_change_pct = (b.ee_kbps_per_w - a.ee_kbps_per_w) / a.ee_kbps_per_w * 100.0;
  } else {
    out.ee_change_pct = b.ee_kbps_per_w > 0.0 ? INFINITY : 0.0;
  }
  return out;
}

}  // namespace ranpower
