#include "ranpower/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "planner_detail.hpp"
#include "ranpower/error.hpp"
#include "ranpower/predict.hpp"

namespace ranpower {

namespace {

constexpr std::size_t kMaxCandidates = std::size_t{1} << 26;

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

std::string gain_text(double gain) {
  std::ostringstream ss;
  ss << gain;
  return ss.str();
}

}  // namespace

// --- inventory -----------------------------------------------------------------

const CarrierSpec& Inventory::carrier(const BandId& band) const {
  for (const auto& c : carriers)
    if (c.band == band) return c;
  throw Error(ErrorKind::Schema, "inventory references unknown carrier " + band.str());
}

std::size_t Inventory::discrete_choices() const {
  std::size_t n = 0;
  for (const auto& ru : rus)
    for (const auto& o : ru.carriers) n += o.mimo_layers.size() * o.gains_dbm.size();
  return n;
}

void Inventory::validate(const ModelBundle* bundle) const {
  require(du_max_rus >= 0, ErrorKind::Schema, "du_max_rus must be >= 0");
  require(cu_utilization >= 0.0 && cu_utilization <= 100.0, ErrorKind::Schema, "cu_utilization must be in [0, 100]");
  std::set<std::string> ids;
  for (const auto& ru : rus) {
    require(!ru.ru_id.empty(), ErrorKind::Schema, "inventory RU id must be non-empty");
    require(ids.insert(ru.ru_id).second, ErrorKind::Duplicate, "duplicate inventory RU " + ru.ru_id);
    const RuPowerModel* model = bundle ? &bundle->ru_model(ru.ru_model_id) : nullptr;
    const LoadRfCurveTable* curves = bundle ? bundle->curves_for(ru.ru_model_id) : nullptr;
    std::set<BandId> bands;
    for (const auto& o : ru.carriers) {
      const std::string where = "RU " + ru.ru_id + " carrier " + o.band.str() + ": ";
      const auto& spec = carrier(o.band);
      require(bands.insert(o.band).second, ErrorKind::Duplicate, where + "listed twice");
      require(!o.mimo_layers.empty() && !o.gains_dbm.empty(), ErrorKind::Schema,
              where + "needs at least one MIMO mode and one gain");
      for (int layers : o.mimo_layers) {
        require(layers >= 1 && layers <= spec.layers, ErrorKind::Schema,
                where + "MIMO mode " + std::to_string(layers) + " outside [1, " + std::to_string(spec.layers) + "]");
      }
      for (double g : o.gains_dbm) require(std::isfinite(g), ErrorKind::Schema, where + "gain must be finite");
      if (!model) continue;
      const auto& chain = model->chain_for(o.band);
      const LoadRfCurve* curve = nullptr;
      if (curves) {
        if (auto it = curves->find(o.band); it != curves->end()) curve = &it->second;
      }
      for (double g : o.gains_dbm) {
        require(g <= chain.max_rating_dbm, ErrorKind::ConstraintViolation,
                where + "gain " + gain_text(g) + " dBm exceeds chain rating " + gain_text(chain.max_rating_dbm) +
                    " dBm");
        require(!curve || std::abs(g - curve->gain_dbm) < 1e-9, ErrorKind::ConstraintViolation,
                where + "gain " + gain_text(g) + " dBm has no calibration data (load curve measured at " +
                    gain_text(curve ? curve->gain_dbm : 0.0) + " dBm)");
      }
    }
  }
}

// --- enumeration -----------------------------------------------------------------

CandidateSpace::CandidateSpace(const Inventory& inventory, const PlanConstraints& constraints)
    : inventory_(&inventory) {
  max_rus_ = inventory.du_max_rus;
  if (constraints.max_active_rus) max_rus_ = std::min(max_rus_, *constraints.max_active_rus);
  for (std::size_t r = 0; r < inventory.rus.size(); ++r) {
    for (const auto& o : inventory.rus[r].carriers) {
      Slot slot;
      slot.ru = r;
      slot.carrier = &inventory.carrier(o.band);
      for (int layers : o.mimo_layers)
        for (double g : o.gains_dbm) slot.choices.push_back({layers, g});
      require(size_ <= kMaxCandidates / (slot.choices.size() + 1), ErrorKind::ConstraintViolation,
              "inventory choice space is too large to enumerate");
      size_ *= slot.choices.size() + 1;
      slots_.push_back(std::move(slot));
    }
  }
}

bool CandidateSpace::decode(std::size_t index, ScenarioConfig& out) const {
  out.rus.clear();
  out.cu_utilization = inventory_->cu_utilization;
  std::size_t rest = index;
  std::vector<std::size_t> digit(slots_.size());
  for (std::size_t s = slots_.size(); s-- > 0;) {
    const std::size_t base = slots_[s].choices.size() + 1;
    digit[s] = rest % base;
    rest /= base;
  }
  std::size_t current_ru = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (digit[s] == 0) continue;
    const auto& slot = slots_[s];
    if (slot.ru != current_ru) {
      const auto& inv_ru = inventory_->rus[slot.ru];
      RuActivation ru;
      ru.ru_id = inv_ru.ru_id;
      ru.ru_model_id = inv_ru.ru_model_id;
      out.rus.push_back(std::move(ru));
      current_ru = slot.ru;
    }
    const auto& choice = slot.choices[digit[s] - 1];
    CarrierActivation act;
    act.carrier = *slot.carrier;
    act.active_layers = choice.layers;
    act.tx_gain_dbm = choice.gain_dbm;
    act.dl_load = 1.0;
    out.rus.back().carriers.push_back(std::move(act));
  }
  out.n_rus_on_du = static_cast<int>(out.rus.size());
  if (out.n_rus_on_du > max_rus_) return false;
  std::set<BandId> active;
  for (const auto& ru : out.rus)
    for (const auto& act : ru.carriers) active.insert(act.carrier.band);
  for (const auto& ru : out.rus) {
    for (const auto& act : ru.carriers) {
      if (act.carrier.is_sdl && !active.count(*act.carrier.required_primary)) return false;
    }
  }
  return true;
}

std::vector<ScenarioConfig> enumerate_configs(const Inventory& inventory, const PlanConstraints& constraints) {
  inventory.validate();
  const CandidateSpace space(inventory, constraints);
  std::vector<ScenarioConfig> out;
  ScenarioConfig config;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.decode(i, config)) out.push_back(config);
  }
  return out;
}

std::string config_id(const ScenarioConfig& config) {
  if (config.rus.empty()) return "off";
  std::string id;
  for (const auto& ru : config.rus) {
    if (!id.empty()) id += "+";
    id += ru.ru_id + "[";
    for (std::size_t i = 0; i < ru.carriers.size(); ++i) {
      const auto& act = ru.carriers[i];
      if (i) id += ",";
      id += act.carrier.band.str() + ":" + std::to_string(act.active_layers) + "L@" + gain_text(act.tx_gain_dbm);
    }
    id += "]";
  }
  return id;
}

bool assign_demand(ScenarioConfig& config, double demand_mbps) {
  double capacity = 0.0;
  for (const auto& ru : config.rus)
    for (const auto& act : ru.carriers) capacity += act.capacity_dl_mbps();
  if (demand_mbps > capacity) return false;
  const double load = capacity > 0.0 ? demand_mbps / capacity : 0.0;
  for (auto& ru : config.rus)
    for (auto& act : ru.carriers) act.dl_load = std::min(1.0, load);
  return true;
}

namespace detail {

CandidateEvaluation evaluate_candidate(const CandidateSpace& space, std::size_t index, double demand_mbps,
                                       const ModelBundle& models, ScenarioConfig& scratch) {
  CandidateEvaluation ev;
  if (!space.decode(index, scratch)) return ev;
  ev.valid = true;
  ev.active_rus = static_cast<int>(scratch.rus.size());
  for (const auto& ru : scratch.rus)
    for (const auto& act : ru.carriers) ev.capacity_dl_mbps += act.capacity_dl_mbps();
  if (!assign_demand(scratch, demand_mbps)) return ev;
  try {
    const auto predicted = predict_system_power(models, scratch);
    ev.system_power = predicted.system_total;
    ev.served_dl_mbps = scratch.total_dl_mbps();
    ev.ee_kbps_per_w = predicted.system_total > 0.0 ? energy_efficiency(ev.served_dl_mbps, predicted.system_total) : 0.0;
    ev.feasible = true;
  } catch (const Error&) {
    ev.feasible = false;
  }
  return ev;
}

}  // namespace detail

bool better_candidate(const CandidateEvaluation& a, const CandidateEvaluation& b) {
  if (a.system_power != b.system_power) return a.system_power < b.system_power;
  if (a.ee_kbps_per_w != b.ee_kbps_per_w) return a.ee_kbps_per_w > b.ee_kbps_per_w;
  return a.active_rus < b.active_rus;
}

PlanResult plan_min_power(double demand_mbps, const Inventory& inventory, const ModelBundle& models,
                          const PlanConstraints& constraints, Execution execution) {
  require(std::isfinite(demand_mbps) && demand_mbps >= 0.0, ErrorKind::Domain, "demand must be a finite value >= 0");
  inventory.validate(&models);

  PlanResult result;
  if (demand_mbps == 0.0 && inventory.du_cu_can_power_off) {
    result.chosen.cu_utilization = inventory.cu_utilization;
    result.chosen_id = config_id(result.chosen);
    result.alternatives_considered = 1;
    return result;
  }

  const CandidateSpace space(inventory, constraints);
  const auto evals = execution == Execution::Parallel ? evaluate_candidates_parallel(space, demand_mbps, models)
                                                      : evaluate_candidates_serial(space, demand_mbps, models);

  std::size_t best = evals.size();
  std::string best_id;
  double max_capacity = 0.0;
  ScenarioConfig probe;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& e = evals[i];
    if (!e.valid) continue;
    ++result.alternatives_considered;
    max_capacity = std::max(max_capacity, e.capacity_dl_mbps);
    if (!e.feasible) continue;
    if (best == evals.size() || better_candidate(e, evals[best])) {
      best = i;
      best_id.clear();
    } else if (!better_candidate(evals[best], e)) {
      if (best_id.empty()) {
        space.decode(best, probe);
        best_id = config_id(probe);
      }
      space.decode(i, probe);
      std::string id = config_id(probe);
      if (id < best_id) {
        best = i;
        best_id = std::move(id);
      }
    }
  }
  if (best == evals.size()) {
    std::ostringstream msg;
    msg << "demand " << demand_mbps << " Mb/s cannot be served; max achievable " << max_capacity << " Mb/s";
    throw InfeasibleError(msg.str(), max_capacity);
  }

  space.decode(best, result.chosen);
  assign_demand(result.chosen, demand_mbps);
  result.chosen_id = config_id(result.chosen);
  result.predicted = predict_system_power(models, result.chosen);
  result.achieved_dl_mbps = result.chosen.total_dl_mbps();
  result.ee_kbps_per_w =
      result.predicted.system_total > 0.0 ? energy_efficiency(result.achieved_dl_mbps, result.predicted.system_total)
                                          : 0.0;
  return result;
}

// --- what-if -----------------------------------------------------------------------

ScenarioConfig apply_edits(const ScenarioConfig& base, const std::vector<ScenarioEdit>& edits) {
  ScenarioConfig out = base;
  for (const auto& edit : edits) {
    auto ru = std::find_if(out.rus.begin(), out.rus.end(), [&](auto& r) { return r.ru_id == edit.ru_id; });
    require(ru != out.rus.end(), ErrorKind::ConstraintViolation, "edit names unknown RU " + edit.ru_id);
    auto act = std::find_if(ru->carriers.begin(), ru->carriers.end(),
                            [&](auto& a) { return a.carrier.band == edit.band; });
    require(act != ru->carriers.end(), ErrorKind::ConstraintViolation,
            "RU " + edit.ru_id + " has no active carrier " + edit.band.str());
    switch (edit.field) {
      case EditField::DlLoad:
        require(edit.value >= 0.0 && edit.value <= 1.0, ErrorKind::ConstraintViolation, "dl_load must be in [0, 1]");
        act->dl_load = edit.value;
        break;
      case EditField::ActiveLayers:
        require(edit.value == std::floor(edit.value), ErrorKind::ConstraintViolation,
                "active_layers must be an integer");
        act->active_layers = static_cast<int>(edit.value);
        break;
      case EditField::TxGain:
        act->tx_gain_dbm = edit.value;
        break;
      case EditField::Remove:
        ru->carriers.erase(act);
        break;
    }
  }
  out.rus.erase(std::remove_if(out.rus.begin(), out.rus.end(), [](auto& r) { return r.carriers.empty(); }),
                out.rus.end());
  if (base.n_rus_on_du == static_cast<int>(base.rus.size())) out.n_rus_on_du = static_cast<int>(out.rus.size());
  try {
    out.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConstraintViolation, std::string("edited scenario is invalid: ") + e.what());
  }
  return out;
}

WhatIfResult what_if(const ScenarioConfig& base, const std::vector<ScenarioEdit>& edits, const ModelBundle& models) {
  const ScenarioConfig edited = apply_edits(base, edits);
  WhatIfResult out;
  out.base = ee_report(base, predict_system_power(models, base), "base");
  out.edited = ee_report(edited, predict_system_power(models, edited), "edited");
  out.comparison = compare_scenarios(out.base, out.edited);
  const auto& a = out.base.breakdown;
  const auto& b = out.edited.breakdown;
  for (const auto& [id, w] : a.per_ru) out.per_ru_delta[id] = -w;
  for (const auto& [id, w] : b.per_ru) out.per_ru_delta[id] += w;
  out.ru_total_delta = b.ru_total - a.ru_total;
  out.du_delta = b.du - a.du;
  out.cu_delta = b.cu - a.cu;
  out.system_delta = b.system_total - a.system_total;
  return out;
}

}  // namespace ranpower
