#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ranpower/dataset.hpp"
#include "ranpower/model.hpp"

namespace ranpower {

struct IdleObservation {
  std::set<BandId> active_bands;
  double measured_power = 0.0;
  std::map<BandId, int> disabled_chains;  // credited back before fitting
};

struct IdleFit {
  double base_power = 0.0;
  std::map<BandId, double> per_band_idle;
  std::vector<double> residuals;  // fitted - measured, per observation
};

// Solves P_i = base + sum_{b in active_i} idle_b in the least-squares sense.
// Throws UnderdeterminedError naming the parameters the data cannot separate.
// `disable_credit` is applied per disabled chain listed in an observation.
IdleFit fit_idle_powers(std::span<const IdleObservation> observations,
                        double disable_credit = kDefaultDisableCreditW);

struct LoadedObservation {
  std::set<BandId> active_bands;
  std::map<BandId, double> per_band_rf_power;
  std::map<BandId, double> per_band_gain;  // per-chain drive level, dBm
  double measured_power = 0.0;
};

// RF out over the power drawn above idle. Requires exactly one band to carry RF.
double estimate_pa_efficiency(const LoadedObservation& obs, double idle_power);

// Duplicate drive levels are averaged; result sorted by power.
EfficiencyCurve fit_efficiency_curve(std::span<const std::pair<double, double>> samples);

// Affine least squares rf = overhead + load * span. A negative intercept is
// clamped to zero by refitting through the origin.
LoadRfCurve fit_load_rf_curve(std::span<const std::pair<double, double>> samples);

struct DuSample {
  int n_rus = 0;
  double total_dl_mbps = 0.0;
  double server_power = 0.0;
};

struct PodSample {
  double server_power = 0.0;
  double pod_power = 0.0;
};

// Least squares on idle + n_rus * increment + slope * dl. When n_rus never
// varies the increment is not separable from idle and is left at zero.
DuPowerModel fit_du_model(std::span<const DuSample> samples, std::span<const PodSample> pod_samples = {});

struct ResidualEntry {
  std::string fitter;       // e.g. "TypeA.idle", "du", "TypeA.n70.load_rf"
  std::string observation;  // record key or idle label
  double residual = 0.0;    // fitted - measured, W
};

struct CalibrationReport {
  ModelBundle bundle;
  std::vector<ResidualEntry> residuals;
  std::vector<std::string> underdetermined;  // sorted, unique
  std::vector<std::string> notes;

  double max_abs_residual() const;
};

struct CalibrationOptions {
  // Used when neither the dataset nor a radio spec overrides it.
  double default_disable_credit = kDefaultDisableCreditW;
};

// Partitions the dataset into idle, loaded, DU and CU observations and runs
// every fitter. Parameters the data cannot pin down are listed in
// `underdetermined` instead of failing the run.
CalibrationReport calibrate_from_dataset(const Dataset& dataset, const CalibrationOptions& options = {});

}  // namespace ranpower
