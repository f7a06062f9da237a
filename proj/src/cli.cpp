#include "ranpower/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "ranpower/calibration.hpp"
#include "ranpower/error.hpp"
#include "ranpower/fixtures.hpp"
#include "ranpower/predict.hpp"
#include "ranpower/report.hpp"
#include "ranpower/serialize.hpp"
#include "ranpower/units.hpp"

namespace ranpower {

namespace {

struct Options {
  std::string format = "table";
  std::string out_path;
  std::string dataset_path;
  bool fixtures = false;
  std::string group = "energy";
  std::string model_path;
  std::string report_path;
  std::string scenario_path;
  std::string record_key;
  std::string inventory_path;
  double tolerance_pct = 10.0;
  double demand_mbps = 0.0;
  std::optional<int> max_rus;
  bool serial = false;
  std::string ru_model;
  std::string band;
  std::string sweep;
  double from = 0.0;
  double to = 0.0;
  int steps = 21;
  std::optional<double> gain_dbm;
  std::optional<int> layers;
  double load = 1.0;
};

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  void operator()(const std::string& text) const {
    if (opt_.out_path.empty()) {
      out_ << text;
    } else {
      write_text_file(opt_.out_path, text);
    }
  }

 private:
  const Options& opt_;
  std::ostream& out_;
};

[[noreturn]] void usage(const std::string& why) { throw Error(ErrorKind::Schema, why); }

Dataset load_input_dataset(const Options& opt) {
  if (opt.fixtures == !opt.dataset_path.empty()) usage("give either a dataset path or --fixtures");
  if (opt.fixtures) return embedded_fixtures();
  return load_dataset(opt.dataset_path);
}

ModelBundle load_model(const Options& opt) {
  if (opt.model_path.empty()) usage("--model is required");
  auto bundle = parse_bundle_json(read_text_file(opt.model_path));
  bundle.validate();
  return bundle;
}

std::string plain(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

int cmd_calibrate(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input_dataset(opt);
  const auto report = calibrate_from_dataset(dataset);
  const auto format = parse_format(opt.format);

  // --out takes the model bundle; the report goes to stdout and optionally a file.
  if (!opt.out_path.empty()) write_text_file(opt.out_path, bundle_to_json(report.bundle));
  if (!opt.report_path.empty()) write_text_file(opt.report_path, calibration_report_to_json(report));
  out << (format == OutputFormat::Json ? calibration_report_to_json(report)
                                       : render(calibration_table(report), format));

  for (const auto& note : report.notes) err << "note: " << note << "\n";
  if (!report.underdetermined.empty()) {
    err << "under-determined:";
    for (const auto& p : report.underdetermined) err << " " << p;
    err << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_predict(const Options& opt, std::ostream& out, std::ostream&) {
  const auto bundle = load_model(opt);
  ScenarioConfig scenario;
  if (!opt.scenario_path.empty() && !opt.record_key.empty()) usage("give either --scenario or --record");
  if (!opt.scenario_path.empty()) {
    scenario = parse_scenario_json(read_text_file(opt.scenario_path), embedded_fixtures().carriers);
  } else if (!opt.record_key.empty()) {
    scenario = fixture_scenario(opt.record_key);
  } else {
    usage("--scenario or --record is required");
  }
  const auto breakdown = predict_system_power(bundle, scenario);
  const auto report = ee_report(scenario, breakdown, opt.record_key);
  const auto format = parse_format(opt.format);
  Emitter emit(opt, out);
  emit(format == OutputFormat::Json ? ee_report_to_json(report) : render(breakdown_table(report), format));
  return kExitOk;
}

int cmd_report(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input_dataset(opt);
  const auto table = energy_table(dataset, opt.group);
  const auto format = parse_format(opt.format);
  Emitter emit(opt, out);
  emit(format == OutputFormat::Json ? ee_reports_to_json(table.reports) : render(table.table, format));
  for (const auto& key : table.skipped) err << "skipped " << key << ": missing power readings\n";
  return table.skipped.empty() ? kExitOk : kExitPartial;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream&) {
  if (!(opt.tolerance_pct >= 0.0)) usage("--tolerance must be >= 0");
  const auto dataset = load_input_dataset(opt);
  const auto bundle = load_model(opt);

  TableData table;
  table.header = {"record", "measured_w", "predicted_w", "residual_pct", "reconcile", "status"};
  bool all_pass = true;
  for (const auto& rec : dataset.records) {
    std::vector<std::string> row{rec.key(), "", "", "", "", ""};
    bool pass = true;
    std::string why;

    int flagged = 0, checked = 0;
    for (const auto& f : reconcile_power_sources(rec)) {
      checked += f.checked ? 1 : 0;
      flagged += f.flagged ? 1 : 0;
    }
    row[4] = checked == 0 ? "n/a" : flagged == 0 ? "ok" : std::to_string(flagged) + " flagged";
    if (flagged > 0) pass = false;

    std::optional<double> measured = rec.total_power;
    if (!measured) {
      try {
        measured = ee_report(rec).breakdown.system_total;
      } catch (const Error&) {
      }
    }
    try {
      const auto predicted = predict_system_power(bundle, scenario_for_record(dataset, rec)).system_total;
      row[2] = format_number(predicted);
      if (measured && *measured > 0.0) {
        const double pct = std::abs(predicted - *measured) / *measured * 100.0;
        row[1] = format_number(*measured);
        row[3] = format_number(pct);
        if (!(pct <= opt.tolerance_pct)) pass = false;
      } else {
        pass = false;
        why = "no measured total";
      }
    } catch (const Error& e) {
      pass = false;
      why = e.what();
    }
    row[5] = pass ? "PASS" : why.empty() ? "FAIL" : "FAIL (" + why + ")";
    all_pass = all_pass && pass;
    table.rows.push_back(std::move(row));
  }
  Emitter emit(opt, out);
  emit(render(table, parse_format(opt.format)));
  return all_pass ? kExitOk : kExitPartial;
}

int cmd_plan(const Options& opt, std::ostream& out, std::ostream&) {
  if (!(opt.demand_mbps >= 0.0)) usage("--demand must be >= 0");
  const auto bundle = load_model(opt);
  Inventory inventory;
  if (opt.fixtures == !opt.inventory_path.empty()) usage("give either --inventory or --fixtures");
  inventory = opt.fixtures ? fixture_inventory()
                           : parse_inventory_json(read_text_file(opt.inventory_path), embedded_fixtures().carriers);
  PlanConstraints constraints;
  constraints.max_active_rus = opt.max_rus;
  const auto result = plan_min_power(opt.demand_mbps, inventory, bundle, constraints,
                                     opt.serial ? Execution::Serial : Execution::Parallel);
  const auto format = parse_format(opt.format);
  Emitter emit(opt, out);
  if (format == OutputFormat::Json) {
    emit(plan_result_to_json(result));
  } else {
    std::string text = render(plan_table(result), format);
    if (format == OutputFormat::Table) {
      text = "plan " + result.chosen_id + "\n" + text + "ee_kbps_per_w " +
             std::to_string(round_half_up(result.ee_kbps_per_w)) + "\nalternatives_considered " +
             std::to_string(result.alternatives_considered) + "\n";
    }
    emit(text);
  }
  return kExitOk;
}

int cmd_plotdata(const Options& opt, std::ostream& out, std::ostream&) {
  const auto bundle = load_model(opt);
  if (opt.ru_model.empty() || opt.band.empty()) usage("--ru-model and --band are required");
  if (opt.steps < 0) usage("--steps must be >= 0");
  const auto& model = bundle.ru_model(opt.ru_model);
  const BandId band(opt.band);
  const auto& chain = model.chain_for(band);
  const auto* curves = bundle.curves_for(opt.ru_model);
  const LoadRfCurve* curve = nullptr;
  if (curves) {
    if (auto it = curves->find(band); it != curves->end()) curve = &it->second;
  }

  std::optional<CarrierSpec> spec;
  for (const auto& c : embedded_fixtures().carriers) {
    if (c.band == band) spec = c;
  }
  const int layers = opt.layers.value_or(spec ? spec->layers : chain.n_tx);
  const double gain = opt.gain_dbm.value_or(curve ? curve->gain_dbm : 37.0);

  std::string x_name;
  if (opt.sweep == "rf_power") {
    x_name = "rf_power_w";
  } else if (opt.sweep == "load" || opt.sweep == "gain") {
    if (!spec) usage("band " + opt.band + " is not in the carrier catalog");
    x_name = opt.sweep == "load" ? "dl_load" : "tx_gain_dbm";
  } else {
    usage("unknown sweep variable '" + opt.sweep + "' (rf_power, load or gain)");
  }

  auto power_at = [&](double x) {
    if (opt.sweep == "rf_power") {
      if (x < 0.0) throw Error(ErrorKind::Domain, "RF power must be >= 0");
      double p = ru_idle_power(model, {band});
      if (x > 0.0) p += x / efficiency_at(chain.efficiency, watts_to_dbm(x / layers));
      return p;
    }
    CarrierActivation act;
    act.carrier = *spec;
    act.active_layers = layers;
    act.tx_gain_dbm = opt.sweep == "gain" ? x : gain;
    act.dl_load = opt.sweep == "load" ? x : opt.load;
    const std::vector<CarrierActivation> acts{act};
    return predict_ru_power(model, acts, {}, curves);
  };

  std::string text = x_name + ",ru_power_w\n";
  if (opt.from <= opt.to) {
    for (int i = 0; i < opt.steps; ++i) {
      const double x = opt.steps == 1 ? opt.from : opt.from + (opt.to - opt.from) * i / (opt.steps - 1);
      text += plain(x) + "," + plain(power_at(x)) + "\n";
    }
  }
  Emitter emit(opt, out);
  emit(text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"RAN power model calibration, prediction, reporting and planning", "ranpower"};
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--out", opt.out_path, "write data output to this file");
  };
  auto dataset_input = [&](CLI::App* sub) {
    sub->add_option("dataset", opt.dataset_path, "dataset file (.json or .csv)");
    sub->add_flag("--fixtures", opt.fixtures, "use the embedded measurement set");
  };

  auto* calibrate = app.add_subcommand("calibrate", "fit a model bundle from a dataset");
  dataset_input(calibrate);
  calibrate->add_option("--format", opt.format, "report format: table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  calibrate->add_option("--out", opt.out_path, "write the fitted model bundle here");
  calibrate->add_option("--report", opt.report_path, "write the calibration report (JSON) here");

  auto* predict = app.add_subcommand("predict", "predict power and EE for a scenario");
  common(predict);
  predict->add_option("--model", opt.model_path, "model bundle or calibration report")->required();
  predict->add_option("--scenario", opt.scenario_path, "scenario JSON");
  predict->add_option("--record", opt.record_key, "use the deployment of an embedded record, e.g. 27");

  auto* report = app.add_subcommand("report", "energy-efficiency table for a dataset");
  dataset_input(report);
  common(report);
  report->add_option("--group", opt.group, "record group (energy or pathloss)");

  auto* validate = app.add_subcommand("validate", "check power sources and model residuals per record");
  dataset_input(validate);
  common(validate);
  validate->add_option("--model", opt.model_path, "model bundle or calibration report")->required();
  validate->add_option("--tolerance", opt.tolerance_pct, "allowed system-total residual, percent");

  auto* plan = app.add_subcommand("plan", "minimum-power configuration for a DL demand");
  common(plan);
  plan->add_option("--model", opt.model_path, "model bundle or calibration report")->required();
  plan->add_option("--inventory", opt.inventory_path, "inventory JSON");
  plan->add_flag("--fixtures", opt.fixtures, "use the embedded inventory");
  plan->add_option("--demand", opt.demand_mbps, "downlink demand, Mb/s")->required();
  plan->add_option("--max-rus", opt.max_rus, "cap on active RUs");
  plan->add_flag("--serial", opt.serial, "evaluate candidates on one thread");

  auto* plotdata = app.add_subcommand("plotdata", "two-column CSV of predicted RU power over a sweep");
  plotdata->add_option("--out", opt.out_path, "write the CSV to this file");
  plotdata->add_option("--model", opt.model_path, "model bundle or calibration report")->required();
  plotdata->add_option("--ru-model", opt.ru_model, "RU model id")->required();
  plotdata->add_option("--band", opt.band, "carrier band")->required();
  plotdata->add_option("--sweep", opt.sweep, "rf_power, load or gain")->required();
  plotdata->add_option("--from", opt.from, "first x value");
  plotdata->add_option("--to", opt.to, "last x value");
  plotdata->add_option("--steps", opt.steps, "number of points");
  plotdata->add_option("--gain", opt.gain_dbm, "Tx gain for load sweeps, dBm");
  plotdata->add_option("--layers", opt.layers, "active layers");
  plotdata->add_option("--load", opt.load, "DL load for gain sweeps, 0..1");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*calibrate) return cmd_calibrate(opt, out, err);
    if (*predict) return cmd_predict(opt, out, err);
    if (*report) return cmd_report(opt, out, err);
    if (*validate) return cmd_validate(opt, out, err);
    if (*plan) return cmd_plan(opt, out, err);
    if (*plotdata) return cmd_plotdata(opt, out, err);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace ranpower
