#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ranpower/metrics.hpp"
#include "ranpower/model.hpp"

namespace ranpower {

struct CarrierOption {
  BandId band;
  std::vector<int> mimo_layers;  // allowed active-layer counts
  std::vector<double> gains_dbm;
};

struct InventoryRu {
  std::string ru_id;
  std::string ru_model_id;
  std::vector<CarrierOption> carriers;
};

struct Inventory {
  std::vector<InventoryRu> rus;
  int du_max_rus = 0;
  double cu_utilization = 0.0;
  // Lets a zero-demand plan switch the DU and CU off entirely.
  bool du_cu_can_power_off = false;
  std::vector<CarrierSpec> carriers;  // catalog the carrier options refer to

  const CarrierSpec& carrier(const BandId& band) const;
  // Counts every (carrier, MIMO mode, gain) choice across the inventory.
  std::size_t discrete_choices() const;
  void validate(const ModelBundle* bundle = nullptr) const;
};

struct PlanConstraints {
  std::optional<int> max_active_rus;  // tighter than the DU capacity, if set
};

// Every activation pattern the inventory allows: each carrier off or on at
// one (MIMO, gain) choice, subject to SDL pairing and DU capacity. Loads are
// left at 1.0. The all-off configuration is always first.
std::vector<ScenarioConfig> enumerate_configs(const Inventory& inventory, const PlanConstraints& constraints = {});

// Canonical, human-readable id used as the final tie-break.
std::string config_id(const ScenarioConfig& config);

// Spreads demand over every active carrier in proportion to its capacity.
// Returns false when the config cannot carry the demand.
bool assign_demand(ScenarioConfig& config, double demand_mbps);

struct PlanResult {
  ScenarioConfig chosen;
  std::string chosen_id;
  PowerBreakdown predicted;
  double achieved_dl_mbps = 0.0;
  double ee_kbps_per_w = 0.0;
  std::size_t alternatives_considered = 0;
};

enum class Execution { Serial, Parallel };

// Minimum predicted system power over all feasible configurations. Ties go
// to higher EE, then fewer active RUs, then the smaller config id. Throws
// InfeasibleError (with the best achievable throughput) when nothing fits.
PlanResult plan_min_power(double demand_mbps, const Inventory& inventory, const ModelBundle& models,
                          const PlanConstraints& constraints = {}, Execution execution = Execution::Parallel);

// --- candidate evaluation kernels -------------------------------------------

// The discrete choice space of an inventory, addressed by a mixed-radix
// index (one digit per carrier slot, digit 0 = carrier off). Index 0 is the
// all-off configuration. Decoding is cheap and allocation-light so the
// planner never materializes the whole space.
class CandidateSpace {
 public:
  CandidateSpace(const Inventory& inventory, const PlanConstraints& constraints = {});

  std::size_t size() const noexcept { return size_; }
  // Fills `out` with configuration `index` at full load. Returns false when
  // the pattern breaks SDL pairing or the RU limit.
  bool decode(std::size_t index, ScenarioConfig& out) const;
  const Inventory& inventory() const noexcept { return *inventory_; }

 private:
  struct Choice {
    int layers = 0;
    double gain_dbm = 0.0;
  };
  struct Slot {
    std::size_t ru = 0;
    const CarrierSpec* carrier = nullptr;
    std::vector<Choice> choices;  // excludes "off"
  };

  const Inventory* inventory_;
  std::vector<Slot> slots_;
  std::size_t size_ = 1;
  int max_rus_ = 0;
};

struct CandidateEvaluation {
  bool valid = false;     // passes SDL pairing and the RU limit
  bool feasible = false;  // valid, carries the demand, within PA ratings
  double capacity_dl_mbps = 0.0;
  double system_power = 0.0;
  double ee_kbps_per_w = 0.0;
  double served_dl_mbps = 0.0;
  int active_rus = 0;
};

// Loads every candidate for the demand and predicts its power, one result
// per space index. The serial version is the reference the OpenMP version is
// tested against.
std::vector<CandidateEvaluation> evaluate_candidates_serial(const CandidateSpace& space, double demand_mbps,
                                                            const ModelBundle& models);
std::vector<CandidateEvaluation> evaluate_candidates_parallel(const CandidateSpace& space, double demand_mbps,
                                                              const ModelBundle& models);

// Strict total order used to pick the plan: lower power, then higher EE,
// then fewer RUs. Full ties fall back to config ids.
bool better_candidate(const CandidateEvaluation& a, const CandidateEvaluation& b);

// --- what-if ------------------------------------------------------------------

enum class EditField { DlLoad, ActiveLayers, TxGain, Remove };

struct ScenarioEdit {
  std::string ru_id;
  BandId band;
  EditField field = EditField::DlLoad;
  double value = 0.0;
};

struct WhatIfResult {
  EeReport base;
  EeReport edited;
  ScenarioComparison comparison;
  std::map<std::string, double> per_ru_delta;
  double ru_total_delta = 0.0;
  double du_delta = 0.0;
  double cu_delta = 0.0;
  double system_delta = 0.0;
};

ScenarioConfig apply_edits(const ScenarioConfig& base, const std::vector<ScenarioEdit>& edits);

WhatIfResult what_if(const ScenarioConfig& base, const std::vector<ScenarioEdit>& edits, const ModelBundle& models);

}  // namespace ranpower
