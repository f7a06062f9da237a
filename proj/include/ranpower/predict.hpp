#pragma once

#include <map>
#include <set>
#include <span>

#include "ranpower/model.hpp"

namespace ranpower {

// Radiated power of one carrier activation across its active layers, W.
//
// With a load curve the RF output follows the measured affine load->RF line,
// rescaled from the curve's reference layer count and Tx gain to the
// activation's. Without one, each active layer radiates dl_load * tx_gain.
// If max_rating_dbm is given, the per-layer output is checked against it.
double carrier_rf_power(const CarrierActivation& act, const LoadRfCurve* load_curve = nullptr,
                        std::optional<double> max_rating_dbm = std::nullopt);

// Idle floor for a set of active carriers (each resolved to its RF chain,
// shared chains counted once), less any credits for explicitly disabled
// chains. Per-chain contribution never goes below zero.
double ru_idle_power(const RuPowerModel& model, const std::set<BandId>& active_bands,
                     const std::map<BandId, int>& disabled_chains = {});

struct RuPrediction {
  double power = 0.0;
  double rf = 0.0;
  double idle = 0.0;
};

RuPrediction predict_ru(const RuPowerModel& model, std::span<const CarrierActivation> activations,
                        const std::map<BandId, int>& disabled_chains = {},
                        const LoadRfCurveTable* load_curves = nullptr);

double predict_ru_power(const RuPowerModel& model, std::span<const CarrierActivation> activations,
                        const std::map<BandId, int>& disabled_chains = {},
                        const LoadRfCurveTable* load_curves = nullptr);

double predict_du_power(const DuPowerModel& model, int n_rus, double total_dl_mbps);

// Portion of the DU server draw visible to pod-level accounting.
double du_pod_power(const DuPowerModel& model, double server_power);

double predict_cu_power(const CuPowerModel& model, double utilization_pct);

PowerBreakdown predict_system_power(const ModelBundle& bundle, const ScenarioConfig& scenario);

}  // namespace ranpower
