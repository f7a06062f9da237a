#include "ranpower/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "ranpower/error.hpp"
#include "ranpower/least_squares.hpp"
#include "ranpower/units.hpp"

namespace ranpower {

namespace {

std::vector<std::string> names_at(const std::vector<std::string>& names, const std::vector<int>& idx) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(names[static_cast<std::size_t>(i)]);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

struct IdleSystem {
  std::vector<BandId> bands;  // column i + 1
  Eigen::MatrixXd design;
  Eigen::VectorXd observed;
};

IdleSystem build_idle_system(std::span<const IdleObservation> observations, const std::vector<BandId>& bands,
                             const std::map<BandId, double>& credits) {
  IdleSystem sys;
  sys.bands = bands;
  const auto n = static_cast<Eigen::Index>(bands.size() + 1);
  const auto m = static_cast<Eigen::Index>(observations.size());
  sys.design = Eigen::MatrixXd::Zero(m, n);
  sys.observed = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    sys.design(i, 0) = 1.0;
    double credited = obs.measured_power;
    for (const auto& band : obs.active_bands) {
      auto it = std::find(bands.begin(), bands.end(), band);
      sys.design(i, 1 + (it - bands.begin())) = 1.0;
    }
    for (const auto& [band, count] : obs.disabled_chains) {
      if (obs.active_bands.count(band) == 0) continue;
      credited += static_cast<double>(count) * credits.at(band);
    }
    sys.observed(i) = credited;
  }
  return sys;
}

std::vector<BandId> bands_in(std::span<const IdleObservation> observations) {
  std::set<BandId> all;
  for (const auto& obs : observations) all.insert(obs.active_bands.begin(), obs.active_bands.end());
  return {all.begin(), all.end()};
}

IdleFit unpack_idle(const IdleSystem& sys, const LeastSquaresFit& fit) {
  IdleFit out;
  out.base_power = fit.solution(0);
  for (std::size_t j = 0; j < sys.bands.size(); ++j) {
    out.per_band_idle[sys.bands[j]] = fit.solution(static_cast<Eigen::Index>(j + 1));
  }
  out.residuals.assign(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
  return out;
}

}  // namespace

IdleFit fit_idle_powers(std::span<const IdleObservation> observations, double disable_credit) {
  const auto bands = bands_in(observations);
  std::vector<std::string> names{"base_power"};
  for (const auto& b : bands) names.push_back(b.str());
  if (observations.size() < 2) {
    throw UnderdeterminedError("idle fit needs at least two observations, got " +
                                   std::to_string(observations.size()),
                               names);
  }
  for (const auto& obs : observations) {
    if (!(obs.measured_power > 0.0)) throw Error(ErrorKind::Domain, "idle observations must be positive");
  }
  std::map<BandId, double> credits;
  for (const auto& b : bands) credits[b] = disable_credit;
  const auto sys = build_idle_system(observations, bands, credits);
  const auto fit = solve_least_squares(sys.design, sys.observed);
  if (!fit.full_rank()) {
    auto confounded = names_at(names, fit.confounded());
    throw UnderdeterminedError("idle powers are not separable: " + join(confounded), confounded);
  }
  return unpack_idle(sys, fit);
}

double estimate_pa_efficiency(const LoadedObservation& obs, double idle_power) {
  double rf = 0.0;
  int loaded = 0;
  for (const auto& [band, watts] : obs.per_band_rf_power) {
    if (watts < 0.0) throw Error(ErrorKind::Domain, "RF power must be >= 0 for band " + band.str());
    if (obs.active_bands.count(band) == 0) {
      throw Error(ErrorKind::Domain, "RF power reported for inactive band " + band.str());
    }
    if (watts > 0.0) {
      rf += watts;
      ++loaded;
    }
  }
  if (loaded == 0) throw Error(ErrorKind::NonPhysical, "efficiency is undefined at zero RF output");
  if (loaded > 1) {
    throw Error(ErrorKind::AmbiguousAttribution,
                "efficiency needs exactly one loaded band, got " + std::to_string(loaded));
  }
  if (!(obs.measured_power > idle_power)) {
    throw Error(ErrorKind::NonPhysical, "measured power " + std::to_string(obs.measured_power) +
                                            " W does not exceed idle " + std::to_string(idle_power) + " W");
  }
  return rf / (obs.measured_power - idle_power);
}

EfficiencyCurve fit_efficiency_curve(std::span<const std::pair<double, double>> samples) {
  if (samples.empty()) throw Error(ErrorKind::Domain, "efficiency curve needs at least one sample");
  std::vector<std::pair<double, double>> sorted(samples.begin(), samples.end());
  for (const auto& [dbm, eta] : sorted) {
    if (!(eta > 0.0 && eta < 1.0)) {
      throw Error(ErrorKind::Domain, "efficiency must lie in (0, 1), got " + std::to_string(eta));
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.first < b.first; });
  constexpr double kSameLevelDb = 1e-9;
  std::vector<EfficiencyPoint> points;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].first - sorted[i].first <= kSameLevelDb) sum += sorted[j++].second;
    points.push_back({sorted[i].first, sum / static_cast<double>(j - i)});
    i = j;
  }
  return EfficiencyCurve(std::move(points));
}

LoadRfCurve fit_load_rf_curve(std::span<const std::pair<double, double>> samples) {
  std::set<double> loads;
  for (const auto& [load, rf] : samples) {
    if (!(load >= 0.0 && load <= 1.0)) throw Error(ErrorKind::Domain, "load must be in [0, 1]");
    if (!(rf >= 0.0)) throw Error(ErrorKind::Domain, "RF power must be >= 0");
    loads.insert(load);
  }
  if (loads.size() < 2) {
    throw UnderdeterminedError("load->RF fit needs at least two distinct loads", {"rf_overhead", "rf_span"});
  }
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = samples[static_cast<std::size_t>(i)].first;
    b(i) = samples[static_cast<std::size_t>(i)].second;
  }
  const auto fit = solve_least_squares(a, b);
  LoadRfCurve curve;
  curve.rf_overhead = fit.solution(0);
  curve.rf_span = fit.solution(1);
  if (curve.rf_overhead < 0.0) {
    // Constrained refit through the origin.
    curve.rf_overhead = 0.0;
    curve.rf_span = a.col(1).dot(b) / a.col(1).squaredNorm();
  }
  curve.rf_span = std::max(0.0, curve.rf_span);
  return curve;
}

DuPowerModel fit_du_model(std::span<const DuSample> samples, std::span<const PodSample> pod_samples) {
  if (samples.size() < 3) {
    throw UnderdeterminedError("DU fit needs at least three samples",
                               {"idle_power", "per_ru_idle_increment", "throughput_slope"});
  }
  std::set<double> throughputs;
  std::set<int> ru_counts;
  for (const auto& s : samples) {
    if (s.n_rus < 0 || !(s.total_dl_mbps >= 0.0) || !(s.server_power >= 0.0)) {
      throw Error(ErrorKind::Domain, "DU samples need n_rus >= 0, throughput >= 0, power >= 0");
    }
    throughputs.insert(s.total_dl_mbps);
    ru_counts.insert(s.n_rus);
  }
  if (throughputs.size() < 2) {
    throw UnderdeterminedError("DU fit needs at least two distinct throughputs", {"throughput_slope"});
  }
  const bool with_ru_term = ru_counts.size() >= 2;
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(m, with_ru_term ? 3 : 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    if (with_ru_term) {
      a(i, 1) = s.n_rus;
      a(i, 2) = s.total_dl_mbps;
    } else {
      a(i, 1) = s.total_dl_mbps;
    }
    b(i) = s.server_power;
  }
  const auto fit = solve_least_squares(a, b);
  if (!fit.full_rank()) {
    const std::vector<std::string> names =
        with_ru_term ? std::vector<std::string>{"idle_power", "per_ru_idle_increment", "throughput_slope"}
                     : std::vector<std::string>{"idle_power", "throughput_slope"};
    auto confounded = names_at(names, fit.confounded());
    throw UnderdeterminedError("DU coefficients are not separable: " + join(confounded), confounded);
  }

  DuPowerModel model;
  model.idle_power = fit.solution(0);
  model.per_ru_idle_increment = with_ru_term ? fit.solution(1) : 0.0;
  model.throughput_slope = fit.solution(with_ru_term ? 2 : 1);
  // Rounding noise on a truly flat series can leave tiny negative terms.
  auto clean = [](double& v, const char* name) {
    if (v < 0.0) {
      if (v > -1e-9 * std::max(1.0, std::abs(v))) {
        v = 0.0;
      } else {
        throw Error(ErrorKind::NonPhysical, std::string("DU fit produced negative ") + name);
      }
    }
  };
  clean(model.idle_power, "idle_power");
  clean(model.per_ru_idle_increment, "per_ru_idle_increment");
  if (model.throughput_slope < 0.0 && model.throughput_slope > -1e-12) model.throughput_slope = 0.0;
  clean(model.throughput_slope, "throughput_slope");

  if (!pod_samples.empty()) {
    double gap = 0.0;
    for (const auto& p : pod_samples) gap += p.server_power - p.pod_power;
    gap /= static_cast<double>(pod_samples.size());
    if (gap < 0.0) throw Error(ErrorKind::NonPhysical, "pod power exceeds server power on average");
    model.pod_visibility_gap = gap;
  }
  return model;
}

double CalibrationReport::max_abs_residual() const {
  double worst = 0.0;
  for (const auto& r : residuals) worst = std::max(worst, std::abs(r.residual));
  return worst;
}

// --- dataset orchestration -------------------------------------------------

namespace {

struct ChainLoad {
  double rf = 0.0;
  int layers = 0;
  double nominal = 0.0;  // load * layers * W(gain), used to split a shared RF reading
};

// One RU of one record, resolved against its radio and test case.
struct RuView {
  std::string key;
  const RuMeasurement* ru = nullptr;
  std::vector<CarrierActivation> activations;
  std::map<BandId, ChainLoad> chains;
};

struct RadioWork {
  const RadioSpec* radio = nullptr;
  std::vector<IdleObservation> idle_obs;
  std::vector<std::string> idle_labels;
  std::vector<RuView> loaded;
  std::vector<BandId> chain_bands;
  std::map<BandId, std::vector<std::pair<double, double>>> eta_samples;
  std::optional<LeastSquaresFit> idle_fit;
  std::map<BandId, double> credits;
};

std::string param(const std::string& model, const BandId& band, const char* what) {
  return model + "." + band.str() + "." + what;
}

Eigen::VectorXd idle_combination(const std::vector<BandId>& chain_bands, const std::set<BandId>& active) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chain_bands.size() + 1));
  c(0) = 1.0;
  for (std::size_t j = 0; j < chain_bands.size(); ++j) {
    if (active.count(chain_bands[j])) c(static_cast<Eigen::Index>(j + 1)) = 1.0;
  }
  return c;
}

double reference_gain(const Dataset& ds) {
  std::map<double, int> counts;
  for (const auto& tc : ds.test_cases) ++counts[tc.gain_dbm];
  if (counts.empty()) return 37.0;
  return std::max_element(counts.begin(), counts.end(), [](auto& a, auto& b) { return a.second < b.second; })
      ->first;
}

}  // namespace

CalibrationReport calibrate_from_dataset(const Dataset& ds, const CalibrationOptions& options) {
  if (ds.records.empty() && ds.idle_observations.empty()) {
    throw Error(ErrorKind::EmptyDataset, "dataset has no records or idle observations");
  }
  ds.validate();

  CalibrationReport report;
  std::set<std::string> underdetermined;

  std::vector<const RadioSpec*> radios;
  for (const auto& r : ds.radios) radios.push_back(&r);
  std::sort(radios.begin(), radios.end(), [](auto* a, auto* b) { return a->model_id < b->model_id; });

  std::map<std::string, RadioWork> work;
  for (const auto* radio : radios) {
    auto& w = work[radio->model_id];
    w.radio = radio;
    for (const auto& chain : radio->chains) {
      w.chain_bands.push_back(chain.band);
      w.credits[chain.band] = chain.disable_credit_per_chain.value_or(options.default_disable_credit);
    }
    std::sort(w.chain_bands.begin(), w.chain_bands.end());
  }

  for (const auto& idle : ds.idle_observations) {
    auto& w = work.at(idle.ru_model_id);
    IdleObservation obs;
    for (const auto& band : idle.active_bands) obs.active_bands.insert(w.radio->chain_of(band));
    obs.measured_power = idle.measured_power;
    w.idle_obs.push_back(std::move(obs));
    w.idle_labels.push_back(idle.label.empty() ? "idle#" + std::to_string(w.idle_obs.size()) : idle.label);
  }

  // Split records into per-RU idle and loaded views.
  for (const auto& rec : ds.records) {
    const auto& tc = ds.test_case(rec.test_case_id);
    for (const auto& ru : rec.per_ru) {
      if (!ru.external_power) continue;
      auto& w = work.at(ru.ru_model_id);
      RuView view;
      view.key = rec.key() + "/" + ru.ru_id;
      view.ru = &ru;
      view.activations = activations_for(ds, tc, ru);
      for (const auto& act : view.activations) {
        auto& slot = view.chains[w.radio->chain_of(act.carrier.band)];
        slot.layers = std::max(slot.layers, act.active_layers);
        slot.nominal += act.dl_load * act.active_layers * dbm_to_watts(act.tx_gain_dbm);
      }
      const double dl = std::accumulate(ru.bands.begin(), ru.bands.end(), 0.0,
                                        [](double s, const BandThroughput& b) { return s + b.dl_mbps; });
      if (ru.rf_power && *ru.rf_power == 0.0 && dl == 0.0) {
        IdleObservation obs;
        for (const auto& [chain, load] : view.chains) obs.active_bands.insert(chain);
        obs.measured_power = *ru.external_power;
        w.idle_obs.push_back(std::move(obs));
        w.idle_labels.push_back(view.key);
        continue;
      }
      if (!ru.rf_power || *ru.rf_power <= 0.0 || view.chains.empty()) continue;
      double nominal_total = 0.0;
      for (const auto& [chain, load] : view.chains) nominal_total += load.nominal;
      for (auto& [chain, load] : view.chains) {
        load.rf = nominal_total > 0.0 ? *ru.rf_power * load.nominal / nominal_total
                                      : *ru.rf_power / static_cast<double>(view.chains.size());
      }
      w.loaded.push_back(std::move(view));
    }
  }

  // Direct idle decomposition.
  for (auto& [id, w] : work) {
    if (w.idle_obs.empty()) continue;
    const auto sys = build_idle_system(w.idle_obs, w.chain_bands, w.credits);
    w.idle_fit = solve_least_squares(sys.design, sys.observed);
    std::vector<std::string> names{id + ".base_power"};
    for (const auto& b : w.chain_bands) names.push_back(param(id, b, "idle_power"));
    for (const auto& n : names_at(names, w.idle_fit->confounded())) underdetermined.insert(n);
    for (std::size_t i = 0; i < w.idle_obs.size(); ++i) {
      report.residuals.push_back({id + ".idle", w.idle_labels[i], w.idle_fit->residuals(static_cast<Eigen::Index>(i))});
    }
  }

  // PA efficiency from single-chain loaded readings whose idle floor is known.
  std::vector<double> direct_etas;
  for (auto& [id, w] : work) {
    if (!w.idle_fit) continue;
    for (const auto& view : w.loaded) {
      if (view.chains.size() != 1) continue;
      const auto& [chain, load] = *view.chains.begin();
      const auto c = idle_combination(w.chain_bands, {chain});
      if (!w.idle_fit->estimable(c)) continue;
      LoadedObservation obs;
      obs.active_bands = {chain};
      obs.per_band_rf_power[chain] = load.rf;
      obs.per_band_gain[chain] = watts_to_dbm(load.rf / load.layers);
      obs.measured_power = *view.ru->external_power;
      try {
        const double eta = estimate_pa_efficiency(obs, c.dot(w.idle_fit->solution));
        if (eta >= 1.0) throw Error(ErrorKind::NonPhysical, "efficiency >= 1");
        w.eta_samples[chain].emplace_back(obs.per_band_gain[chain], eta);
        direct_etas.push_back(eta);
      } catch (const Error& e) {
        report.notes.push_back(view.key + ": efficiency sample rejected (" + e.what() + ")");
      }
    }
  }
  std::optional<double> fallback_eta;
  if (!direct_etas.empty()) {
    fallback_eta = std::accumulate(direct_etas.begin(), direct_etas.end(), 0.0) /
                   static_cast<double>(direct_etas.size());
  }
  const double ref_gain = reference_gain(ds);

  for (auto& [id, w] : work) {
    std::map<BandId, EfficiencyCurve> curves;
    for (const auto& band : w.chain_bands) {
      auto it = w.eta_samples.find(band);
      if (it != w.eta_samples.end() && !it->second.empty()) {
        curves[band] = fit_efficiency_curve(it->second);
      } else if (fallback_eta) {
        curves[band] = EfficiencyCurve({{ref_gain, *fallback_eta}});
        underdetermined.insert(param(id, band, "efficiency"));
      } else {
        underdetermined.insert(param(id, band, "efficiency"));
      }
    }
    if (curves.size() != w.chain_bands.size()) {
      report.notes.push_back(id + ": no efficiency data anywhere in the dataset; model omitted");
      continue;
    }

    // Without direct idle readings, back idle out of loaded readings using
    // the (fallback) efficiencies.
    if (!w.idle_fit) {
      std::vector<IdleObservation> derived;
      std::vector<std::string> labels;
      for (const auto& view : w.loaded) {
        IdleObservation obs;
        double radiated = 0.0;
        for (const auto& [chain, load] : view.chains) {
          obs.active_bands.insert(chain);
          radiated += load.rf / efficiency_at(curves.at(chain), watts_to_dbm(load.rf / load.layers));
        }
        obs.measured_power = *view.ru->external_power - radiated;
        derived.push_back(std::move(obs));
        labels.push_back(view.key);
      }
      if (derived.empty()) {
        underdetermined.insert(id + ".base_power");
        for (const auto& b : w.chain_bands) underdetermined.insert(param(id, b, "idle_power"));
        report.notes.push_back(id + ": no idle or loaded readings; model omitted");
        continue;
      }
      const auto sys = build_idle_system(derived, w.chain_bands, w.credits);
      w.idle_fit = solve_least_squares(sys.design, sys.observed);
      std::vector<std::string> names{id + ".base_power"};
      for (const auto& b : w.chain_bands) names.push_back(param(id, b, "idle_power"));
      for (const auto& n : names_at(names, w.idle_fit->confounded())) underdetermined.insert(n);
      for (std::size_t i = 0; i < derived.size(); ++i) {
        report.residuals.push_back({id + ".idle_derived", labels[i], w.idle_fit->residuals(static_cast<Eigen::Index>(i))});
      }
      report.notes.push_back(id + ": no zero-traffic readings; idle powers derived from loaded readings");
    }

    RuPowerModel model;
    model.model_id = id;
    model.base_power = std::max(0.0, w.idle_fit->solution(0));
    model.shared_carriers = w.radio->shared_carriers;
    for (std::size_t j = 0; j < w.chain_bands.size(); ++j) {
      const auto& band = w.chain_bands[j];
      const auto spec_it = std::find_if(w.radio->chains.begin(), w.radio->chains.end(),
                                        [&](const ChainSpec& c) { return c.band == band; });
      RfChainParams chain;
      chain.band = band;
      chain.idle_power = std::max(0.0, w.idle_fit->solution(static_cast<Eigen::Index>(j + 1)));
      chain.n_tx = spec_it->n_tx;
      chain.efficiency = curves.at(band);
      chain.max_rating_dbm = std::max(spec_it->max_rating_dbm, chain.efficiency.max_power_dbm());
      chain.disable_credit_per_chain = w.credits.at(band);
      model.chains.emplace(band, std::move(chain));
    }
    report.bundle.ru_models.emplace(id, std::move(model));

    // Load -> RF lines, per carrier, from RUs with a single active carrier.
    std::map<BandId, std::vector<std::tuple<double, double, std::string, int, double>>> by_carrier;
    for (const auto& view : w.loaded) {
      if (view.activations.size() != 1) continue;
      const auto& act = view.activations.front();
      by_carrier[act.carrier.band].emplace_back(act.dl_load, *view.ru->rf_power, view.key, act.active_layers,
                                                act.tx_gain_dbm);
    }
    for (const auto& [band, rows] : by_carrier) {
      const int ref_layers = ds.carrier(band).layers;
      std::map<double, int> gain_counts;
      for (const auto& row : rows) ++gain_counts[std::get<4>(row)];
      const double gain = std::max_element(gain_counts.begin(), gain_counts.end(),
                                           [](auto& a, auto& b) { return a.second < b.second; })
                              ->first;
      std::vector<std::pair<double, double>> samples;
      std::set<double> loads;
      for (const auto& [load, rf, key, layers, g] : rows) {
        const double scaled = rf * ref_layers / layers * std::pow(10.0, (gain - g) / 10.0);
        samples.emplace_back(load, scaled);
        loads.insert(load);
      }
      LoadRfCurve curve;
      if (loads.size() >= 2) {
        curve = fit_load_rf_curve(samples);
      } else if (*loads.begin() > 0.0) {
        // One operating point: proportional line through it.
        double mean_rf = 0.0;
        for (const auto& s : samples) mean_rf += s.second;
        curve.rf_span = mean_rf / static_cast<double>(samples.size()) / *loads.begin();
      } else {
        continue;
      }
      curve.layers = ref_layers;
      curve.gain_dbm = gain;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        report.residuals.push_back({id + "." + band.str() + ".load_rf", std::get<2>(rows[i]),
                                    curve.at(samples[i].first) - samples[i].second});
      }
      report.bundle.load_rf_curves[id][band] = curve;
    }
  }

  // DU server model.
  std::vector<DuSample> du_samples;
  std::vector<PodSample> pod_samples;
  std::vector<std::string> du_keys;
  for (const auto& rec : ds.records) {
    if (!rec.du_server_power) continue;
    du_samples.push_back({static_cast<int>(rec.per_ru.size()), rec.total_dl_mbps(), *rec.du_server_power});
    du_keys.push_back(rec.key());
    if (rec.du_pod_power) pod_samples.push_back({*rec.du_server_power, *rec.du_pod_power});
  }
  try {
    report.bundle.du_model = fit_du_model(du_samples, pod_samples);
    for (std::size_t i = 0; i < du_samples.size(); ++i) {
      const auto& s = du_samples[i];
      const auto& m = report.bundle.du_model;
      const double fitted = m.idle_power + s.n_rus * m.per_ru_idle_increment + m.throughput_slope * s.total_dl_mbps;
      report.residuals.push_back({"du", du_keys[i], fitted - s.server_power});
    }
  } catch (const UnderdeterminedError& e) {
    for (const auto& p : e.parameters()) underdetermined.insert("du_model." + p);
    double mean = 0.0;
    for (const auto& s : du_samples) mean += s.server_power;
    report.bundle.du_model.idle_power = du_samples.empty() ? 0.0 : mean / du_samples.size();
    report.notes.push_back(std::string("DU model: ") + e.what() + "; using mean server power as idle");
  } catch (const Error& e) {
    underdetermined.insert("du_model");
    report.notes.push_back(std::string("DU model: ") + e.what());
  }

  // CU: affine in utilization when utilization was recorded, flat otherwise.
  std::vector<std::pair<double, double>> cu_points;
  std::vector<double> cu_flat;
  std::vector<std::string> cu_keys;
  for (const auto& rec : ds.records) {
    if (!rec.cu_power) continue;
    cu_flat.push_back(*rec.cu_power);
    if (rec.cu_utilization) {
      cu_points.emplace_back(*rec.cu_utilization, *rec.cu_power);
      cu_keys.push_back(rec.key());
    }
  }
  std::set<double> utils;
  for (const auto& p : cu_points) utils.insert(p.first);
  auto& cu = report.bundle.cu_model;
  if (utils.size() >= 2) {
    const auto m = static_cast<Eigen::Index>(cu_points.size());
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = cu_points[static_cast<std::size_t>(i)].first;
      b(i) = cu_points[static_cast<std::size_t>(i)].second;
    }
    const auto fit = solve_least_squares(a, b);
    cu.p_idle = std::max(0.0, fit.solution(0));
    cu.p_max = std::max(cu.p_idle, fit.solution(0) + 100.0 * fit.solution(1));
    for (Eigen::Index i = 0; i < m; ++i) {
      report.residuals.push_back({"cu", cu_keys[static_cast<std::size_t>(i)], fit.residuals(i)});
    }
  } else if (!cu_flat.empty()) {
    cu.p_idle = cu.p_max = std::accumulate(cu_flat.begin(), cu_flat.end(), 0.0) / cu_flat.size();
    report.notes.push_back("CU model: no utilization variation recorded; flat at mean CU power");
  } else {
    underdetermined.insert("cu_model");
  }

  report.underdetermined.assign(underdetermined.begin(), underdetermined.end());
  report.bundle.validate();
  return report;
}

}  // namespace ranpower
