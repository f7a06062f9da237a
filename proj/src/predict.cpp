#include "ranpower/predict.hpp"

#include <algorithm>
#include <cmath>

#include "ranpower/error.hpp"
#include "ranpower/units.hpp"

namespace ranpower {

namespace {

// Relative slack on the rating check so a curve evaluated exactly at the
// rated output is not rejected by rounding.
constexpr double kRatingSlack = 1e-9;

}  // namespace

double carrier_rf_power(const CarrierActivation& act, const LoadRfCurve* load_curve,
                        std::optional<double> max_rating_dbm) {
  act.validate();
  const double layers = static_cast<double>(act.active_layers);
  double rf = 0.0;
  if (load_curve != nullptr) {
    const double layer_scale = layers / static_cast<double>(load_curve->layers);
    const double gain_scale = std::pow(10.0, (act.tx_gain_dbm - load_curve->gain_dbm) / 10.0);
    rf = load_curve->at(act.dl_load) * layer_scale * gain_scale;
  } else {
    rf = act.dl_load * layers * dbm_to_watts(act.tx_gain_dbm);
  }
  if (max_rating_dbm) {
    const double per_chain = rf / layers;
    const double limit = dbm_to_watts(*max_rating_dbm);
    if (per_chain > limit * (1.0 + kRatingSlack)) {
      throw Error(ErrorKind::RatingExceeded,
                  "carrier " + act.carrier.band.str() + ": per-chain output " +
                      std::to_string(watts_to_dbm(per_chain)) + " dBm exceeds rating " +
                      std::to_string(*max_rating_dbm) + " dBm");
    }
  }
  return rf;
}

double ru_idle_power(const RuPowerModel& model, const std::set<BandId>& active_bands,
                     const std::map<BandId, int>& disabled_chains) {
  std::map<BandId, int> disabled_by_chain;
  for (const auto& [band, count] : disabled_chains) {
    disabled_by_chain[model.chain_for(band).band] += count;
  }
  std::set<BandId> chains;
  for (const auto& band : active_bands) chains.insert(model.chain_for(band).band);

  double idle = model.base_power;
  for (const auto& chain_band : chains) {
    const auto& chain = model.chains.at(chain_band);
    double contribution = chain.idle_power;
    if (auto it = disabled_by_chain.find(chain_band); it != disabled_by_chain.end()) {
      contribution -= static_cast<double>(it->second) * chain.disable_credit_per_chain;
    }
    idle += std::max(0.0, contribution);
  }
  return idle;
}

RuPrediction predict_ru(const RuPowerModel& model, std::span<const CarrierActivation> activations,
                        const std::map<BandId, int>& disabled_chains,
                        const LoadRfCurveTable* load_curves) {
  struct ChainLoad {
    double rf = 0.0;
    int layers = 0;
  };
  std::set<BandId> active;
  std::map<BandId, ChainLoad> per_chain;
  for (const auto& act : activations) {
    const auto& chain = model.chain_for(act.carrier.band);
    const LoadRfCurve* curve = nullptr;
    if (load_curves != nullptr) {
      if (auto it = load_curves->find(act.carrier.band); it != load_curves->end()) curve = &it->second;
    }
    auto& slot = per_chain[chain.band];
    slot.rf += carrier_rf_power(act, curve, chain.max_rating_dbm);
    slot.layers = std::max(slot.layers, act.active_layers);
    active.insert(act.carrier.band);
  }

  RuPrediction out;
  out.idle = ru_idle_power(model, active, disabled_chains);
  out.power = out.idle;
  for (const auto& [chain_band, load] : per_chain) {
    out.rf += load.rf;
    if (load.rf <= 0.0) continue;
    const double per_chain_dbm = watts_to_dbm(load.rf / static_cast<double>(load.layers));
    const double eta = efficiency_at(model.chains.at(chain_band).efficiency, per_chain_dbm);
    out.power += load.rf / eta;
  }
  return out;
}

double predict_ru_power(const RuPowerModel& model, std::span<const CarrierActivation> activations,
                        const std::map<BandId, int>& disabled_chains,
                        const LoadRfCurveTable* load_curves) {
  return predict_ru(model, activations, disabled_chains, load_curves).power;
}

double predict_du_power(const DuPowerModel& model, int n_rus, double total_dl_mbps) {
  if (n_rus < 0 || !(total_dl_mbps >= 0.0)) {
    throw Error(ErrorKind::Domain, "DU prediction needs n_rus >= 0 and total_dl >= 0");
  }
  return model.idle_power + static_cast<double>(n_rus) * model.per_ru_idle_increment +
         model.throughput_slope * total_dl_mbps;
}

double du_pod_power(const DuPowerModel& model, double server_power) {
  if (server_power < model.pod_visibility_gap) {
    throw Error(ErrorKind::InconsistentModel,
                "server power " + std::to_string(server_power) + " W is below the pod visibility gap " +
                    std::to_string(model.pod_visibility_gap) + " W");
  }
  return server_power - model.pod_visibility_gap;
}

double predict_cu_power(const CuPowerModel& model, double utilization_pct) {
  if (!(utilization_pct >= 0.0 && utilization_pct <= 100.0)) {
    throw Error(ErrorKind::Domain,
                "CU utilization must be in [0, 100], got " + std::to_string(utilization_pct));
  }
  // Blend form so both endpoints come out exactly.
  const double t = utilization_pct / 100.0;
  return model.p_idle * (1.0 - t) + model.p_max * t;
}

PowerBreakdown predict_system_power(const ModelBundle& bundle, const ScenarioConfig& scenario) {
  scenario.validate();
  PowerBreakdown out;
  for (const auto& ru : scenario.rus) {
    const auto& model = bundle.ru_model(ru.ru_model_id);
    const auto pred = predict_ru(model, ru.carriers, ru.disabled_chains, bundle.curves_for(ru.ru_model_id));
    out.per_ru[ru.ru_id] = pred.power;
    out.total_rf += pred.rf;
  }
  for (const auto& [id, watts] : out.per_ru) out.ru_total += watts;
  out.du = predict_du_power(bundle.du_model, scenario.n_rus_on_du, scenario.total_dl_mbps());
  out.cu = predict_cu_power(bundle.cu_model, scenario.cu_utilization);
  out.system_total = out.ru_total + out.du + out.cu;
  return out;
}

}  // namespace ranpower
