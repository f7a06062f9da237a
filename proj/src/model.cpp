#include "ranpower/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ranpower/error.hpp"

namespace ranpower {

namespace {

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

BandId::BandId(std::string name) : name_(std::move(name)) {
  require(!name_.empty(), ErrorKind::Schema, "band label must be non-empty");
}

void CarrierSpec::validate() const {
  const std::string where = "carrier " + band.str() + ": ";
  require(!band.empty(), ErrorKind::Schema, "carrier band label must be non-empty");
  require(dl_bandwidth_mhz > 0.0, ErrorKind::Schema, where + "dl_bandwidth must be > 0");
  require(finite_nonneg(ul_bandwidth_mhz), ErrorKind::Schema, where + "ul_bandwidth must be >= 0");
  require(finite_nonneg(max_dl_mbps), ErrorKind::Schema, where + "max_dl_throughput must be >= 0");
  require(finite_nonneg(max_ul_mbps), ErrorKind::Schema, where + "max_ul_throughput must be >= 0");
  require(layers == 1 || layers == 2 || layers == 4 || layers == 8, ErrorKind::Schema,
          where + "layers must be one of 1, 2, 4, 8");
  if (is_sdl) {
    require(ul_bandwidth_mhz == 0.0, ErrorKind::Schema, where + "SDL carrier must have ul_bandwidth 0");
    require(required_primary.has_value(), ErrorKind::Schema,
            where + "SDL carrier must name its required primary");
  }
}

EfficiencyCurve::EfficiencyCurve(std::vector<EfficiencyPoint> points) : points_(std::move(points)) {
  require(!points_.empty(), ErrorKind::Domain, "efficiency curve needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    require(std::isfinite(p.per_chain_tx_power_dbm), ErrorKind::Domain,
            "efficiency curve power must be finite");
    require(p.efficiency > 0.0 && p.efficiency < 1.0, ErrorKind::Domain,
            "efficiency must lie in (0, 1), got " + std::to_string(p.efficiency));
    if (i > 0) {
      require(p.per_chain_tx_power_dbm > points_[i - 1].per_chain_tx_power_dbm, ErrorKind::Domain,
              "efficiency curve powers must be strictly increasing");
    }
  }
}

double EfficiencyCurve::min_efficiency() const {
  return std::min_element(points_.begin(), points_.end(),
                          [](auto& a, auto& b) { return a.efficiency < b.efficiency; })
      ->efficiency;
}

double EfficiencyCurve::max_efficiency() const {
  return std::max_element(points_.begin(), points_.end(),
                          [](auto& a, auto& b) { return a.efficiency < b.efficiency; })
      ->efficiency;
}

double efficiency_at(const EfficiencyCurve& curve, double dbm) {
  const auto& pts = curve.points();
  require(!pts.empty(), ErrorKind::MissingParameter, "efficiency curve is empty");
  if (dbm <= pts.front().per_chain_tx_power_dbm) return pts.front().efficiency;
  if (dbm >= pts.back().per_chain_tx_power_dbm) return pts.back().efficiency;
  auto hi = std::upper_bound(pts.begin(), pts.end(), dbm,
                             [](double x, const EfficiencyPoint& p) { return x < p.per_chain_tx_power_dbm; });
  auto lo = hi - 1;
  const double t = (dbm - lo->per_chain_tx_power_dbm) /
                   (hi->per_chain_tx_power_dbm - lo->per_chain_tx_power_dbm);
  return lo->efficiency + t * (hi->efficiency - lo->efficiency);
}

void RfChainParams::validate() const {
  const std::string where = "chain " + band.str() + ": ";
  require(finite_nonneg(idle_power), ErrorKind::Schema, where + "idle_power must be >= 0");
  require(n_tx >= 1, ErrorKind::Schema, where + "n_tx must be >= 1");
  require(finite_nonneg(disable_credit_per_chain), ErrorKind::Schema,
          where + "disable_credit_per_chain must be >= 0");
  require(!efficiency.points().empty(), ErrorKind::Schema, where + "missing efficiency curve");
  require(max_rating_dbm >= efficiency.max_power_dbm(), ErrorKind::Schema,
          where + "max_rating below the efficiency curve's largest point");
}

const RfChainParams& RuPowerModel::chain_for(const BandId& carrier) const {
  BandId chain = carrier;
  if (auto it = shared_carriers.find(carrier); it != shared_carriers.end()) chain = it->second;
  auto it = chains.find(chain);
  if (it == chains.end()) {
    throw Error(ErrorKind::MissingParameter,
                "model " + model_id + " has no RF chain for band " + carrier.str());
  }
  return it->second;
}

void RuPowerModel::validate() const {
  require(!model_id.empty(), ErrorKind::Schema, "RU model id must be non-empty");
  require(finite_nonneg(base_power), ErrorKind::Schema, "model " + model_id + ": base_power must be >= 0");
  require(!chains.empty(), ErrorKind::Schema, "model " + model_id + ": needs at least one chain");
  for (const auto& [band, chain] : chains) {
    require(band == chain.band, ErrorKind::Schema, "model " + model_id + ": chain key mismatch for " + band.str());
    chain.validate();
  }
  for (const auto& [carrier, chain] : shared_carriers) {
    require(chains.count(chain) == 1, ErrorKind::Schema,
            "model " + model_id + ": carrier " + carrier.str() + " shares unknown chain " + chain.str());
  }
}

void LoadRfCurve::validate() const {
  require(finite_nonneg(rf_overhead), ErrorKind::Schema, "load curve rf_overhead must be >= 0");
  require(finite_nonneg(rf_span), ErrorKind::Schema, "load curve rf_span must be >= 0");
  require(layers >= 1, ErrorKind::Schema, "load curve layers must be >= 1");
  require(std::isfinite(gain_dbm), ErrorKind::Schema, "load curve gain must be finite");
}

void DuPowerModel::validate() const {
  require(finite_nonneg(idle_power) && finite_nonneg(per_ru_idle_increment) &&
              finite_nonneg(throughput_slope) && finite_nonneg(pod_visibility_gap),
          ErrorKind::Schema, "DU model coefficients must all be >= 0");
}

void CuPowerModel::validate() const {
  require(finite_nonneg(p_idle) && std::isfinite(p_max) && p_idle <= p_max, ErrorKind::Schema,
          "CU model requires 0 <= p_idle <= p_max");
}

void CarrierActivation::validate() const {
  carrier.validate();
  require(active_layers >= 1 && active_layers <= carrier.layers, ErrorKind::ConstraintViolation,
          "carrier " + carrier.band.str() + ": active_layers must be in [1, " +
              std::to_string(carrier.layers) + "]");
  require(dl_load >= 0.0 && dl_load <= 1.0, ErrorKind::ConstraintViolation,
          "carrier " + carrier.band.str() + ": dl_load must be in [0, 1]");
  require(std::isfinite(tx_gain_dbm), ErrorKind::ConstraintViolation,
          "carrier " + carrier.band.str() + ": tx_gain must be finite");
}

double CarrierActivation::capacity_dl_mbps() const {
  return carrier.max_dl_mbps * static_cast<double>(active_layers) / static_cast<double>(carrier.layers);
}

double CarrierActivation::served_dl_mbps() const { return dl_load * capacity_dl_mbps(); }

void ScenarioConfig::validate() const {
  require(n_rus_on_du == static_cast<int>(rus.size()), ErrorKind::ConstraintViolation,
          "n_rus_on_du (" + std::to_string(n_rus_on_du) + ") must equal the number of RUs (" +
              std::to_string(rus.size()) + ")");
  require(cu_utilization >= 0.0 && cu_utilization <= 100.0, ErrorKind::ConstraintViolation,
          "cu_utilization must be in [0, 100]");
  std::set<BandId> active;
  std::set<std::string> ids;
  for (const auto& ru : rus) {
    require(ids.insert(ru.ru_id).second, ErrorKind::ConstraintViolation, "duplicate RU id " + ru.ru_id);
    std::set<BandId> on_this_ru;
    for (const auto& act : ru.carriers) {
      act.validate();
      require(on_this_ru.insert(act.carrier.band).second, ErrorKind::ConstraintViolation,
              "RU " + ru.ru_id + " activates carrier " + act.carrier.band.str() + " twice");
      active.insert(act.carrier.band);
    }
    for (const auto& [band, count] : ru.disabled_chains) {
      require(count >= 0, ErrorKind::ConstraintViolation,
              "RU " + ru.ru_id + ": disabled chain count for " + band.str() + " must be >= 0");
    }
  }
  for (const auto& ru : rus) {
    for (const auto& act : ru.carriers) {
      if (!act.carrier.is_sdl) continue;
      const BandId& primary = *act.carrier.required_primary;
      require(active.count(primary) == 1, ErrorKind::ConstraintViolation,
              "SDL carrier " + act.carrier.band.str() + " on RU " + ru.ru_id +
                  " requires primary carrier " + primary.str() + " to be active");
    }
  }
}

double ScenarioConfig::total_dl_mbps() const {
  double total = 0.0;
  for (const auto& ru : rus)
    for (const auto& act : ru.carriers) total += act.served_dl_mbps();
  return total;
}

const RuPowerModel& ModelBundle::ru_model(std::string_view model_id) const {
  auto it = ru_models.find(model_id);
  if (it == ru_models.end()) {
    throw Error(ErrorKind::MissingParameter, "no RU model named " + std::string(model_id));
  }
  return it->second;
}

const LoadRfCurveTable* ModelBundle::curves_for(std::string_view model_id) const {
  auto it = load_rf_curves.find(model_id);
  return it == load_rf_curves.end() ? nullptr : &it->second;
}

void ModelBundle::validate() const {
  for (const auto& [id, model] : ru_models) {
    require(id == model.model_id, ErrorKind::Schema, "RU model key mismatch for " + id);
    model.validate();
  }
  du_model.validate();
  cu_model.validate();
  for (const auto& [id, table] : load_rf_curves)
    for (const auto& [band, curve] : table) curve.validate();
}

}  // namespace ranpower
