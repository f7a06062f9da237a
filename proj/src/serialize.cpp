#include "ranpower/serialize.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ranpower/error.hpp"

namespace ranpower {

using json = nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& why) {
    throw Error(ErrorKind::Schema, (path.empty() ? std::string("document") : path) + ": " + why);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(at(key), "missing required field");
    return *v;
  }

  double number(const std::string& key) { return as_number(need(key), at(key)); }

  double nonneg(const std::string& key) {
    const double v = number(key);
    if (v < 0.0) fail(at(key), "must be >= 0");
    return v;
  }

  std::optional<double> opt_nonneg(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    const double x = as_number(*v, at(key));
    if (x < 0.0) fail(at(key), "must be >= 0");
    return x;
  }

  double number_or(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, at(key)) : fallback;
  }

  int integer(const std::string& key) { return as_int(need(key), at(key)); }

  int integer_or(const std::string& key, int fallback) {
    const json* v = find(key);
    return v ? as_int(*v, at(key)) : fallback;
  }

  std::string string(const std::string& key) { return as_string(need(key), at(key)); }

  std::string string_or(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    return v ? as_string(*v, at(key)) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(at(key), "expected true or false");
    return v->get<bool>();
  }

  const json& array(const std::string& key) {
    const json& v = need(key);
    if (!v.is_array()) fail(at(key), "expected an array");
    return v;
  }

  const json* opt_array(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_array()) fail(at(key), "expected an array");
    return v;
  }

  const json* opt_object(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_object()) fail(at(key), "expected an object");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(at(it.key()), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  static BandId as_band(const json& v, const std::string& path) {
    const std::string s = as_string(v, path);
    if (s.empty()) fail(path, "band label must be non-empty");
    return BandId(s);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

json parse_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorKind::EmptyDataset, "input is empty");
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C"; keep its wording.
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- carriers --------------------------------------------------------------

json carrier_json(const CarrierSpec& c) {
  json j{{"band", c.band.str()},
         {"dl_bandwidth", c.dl_bandwidth_mhz},
         {"ul_bandwidth", c.ul_bandwidth_mhz},
         {"layers", c.layers},
         {"max_dl_throughput", c.max_dl_mbps},
         {"max_ul_throughput", c.max_ul_mbps},
         {"is_sdl", c.is_sdl}};
  if (c.required_primary) j["required_primary"] = c.required_primary->str();
  return j;
}

CarrierSpec read_carrier(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  CarrierSpec c;
  c.band = ObjectReader::as_band(r.need("band"), r.at("band"));
  c.dl_bandwidth_mhz = r.number("dl_bandwidth");
  c.ul_bandwidth_mhz = r.number_or("ul_bandwidth", 0.0);
  c.layers = r.integer("layers");
  c.max_dl_mbps = r.number("max_dl_throughput");
  c.max_ul_mbps = r.number_or("max_ul_throughput", 0.0);
  c.is_sdl = r.boolean_or("is_sdl", false);
  if (const json* p = r.find("required_primary")) c.required_primary = ObjectReader::as_band(*p, r.at("required_primary"));
  r.finish();
  try {
    c.validate();
  } catch (const Error& e) {
    ObjectReader::fail(path, e.what());
  }
  return c;
}

std::vector<CarrierSpec> read_carriers(const json& arr, const std::string& path) {
  std::vector<CarrierSpec> out;
  std::set<BandId> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(read_carrier(arr[i], idx(path, i)));
    if (!seen.insert(out.back().band).second) {
      throw Error(ErrorKind::Duplicate, idx(path, i) + ": duplicate carrier " + out.back().band.str());
    }
  }
  return out;
}

const CarrierSpec& lookup_carrier(const std::vector<CarrierSpec>& catalog, const BandId& band,
                                  const std::string& path) {
  for (const auto& c : catalog)
    if (c.band == band) return c;
  ObjectReader::fail(path, "unknown carrier " + band.str());
}

// --- model bundle ---------------------------------------------------------

json chain_json(const RfChainParams& c) {
  json points = json::array();
  for (const auto& p : c.efficiency.points()) {
    points.push_back({{"per_chain_tx_power", p.per_chain_tx_power_dbm}, {"efficiency", p.efficiency}});
  }
  return {{"idle_power", c.idle_power},
          {"n_tx", c.n_tx},
          {"efficiency", points},
          {"max_rating", c.max_rating_dbm},
          {"disable_credit_per_chain", c.disable_credit_per_chain}};
}

RfChainParams read_chain(const json& j, const std::string& path, const BandId& band) {
  ObjectReader r(j, path);
  RfChainParams c;
  c.band = band;
  c.idle_power = r.nonneg("idle_power");
  c.n_tx = r.integer("n_tx");
  const json& pts = r.array("efficiency");
  std::vector<EfficiencyPoint> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ObjectReader pr(pts[i], idx(r.at("efficiency"), i));
    points.push_back({pr.number("per_chain_tx_power"), pr.number("efficiency")});
    pr.finish();
  }
  try {
    c.efficiency = EfficiencyCurve(std::move(points));
  } catch (const Error& e) {
    ObjectReader::fail(r.at("efficiency"), e.what());
  }
  c.max_rating_dbm = r.number("max_rating");
  c.disable_credit_per_chain = r.number_or("disable_credit_per_chain", kDefaultDisableCreditW);
  r.finish();
  return c;
}

json curve_json(const LoadRfCurve& c) {
  return {{"rf_overhead", c.rf_overhead}, {"rf_span", c.rf_span}, {"layers", c.layers}, {"gain", c.gain_dbm}};
}

json bundle_json(const ModelBundle& b) {
  json rus = json::array();
  for (const auto& [id, m] : b.ru_models) {
    json chains = json::object();
    for (const auto& [band, c] : m.chains) chains[band.str()] = chain_json(c);
    json shared = json::object();
    for (const auto& [carrier, chain] : m.shared_carriers) shared[carrier.str()] = chain.str();
    rus.push_back({{"model_id", id}, {"base_power", m.base_power}, {"chains", chains}, {"shared_carriers", shared}});
  }
  json curves = json::object();
  for (const auto& [id, table] : b.load_rf_curves) {
    json t = json::object();
    for (const auto& [band, c] : table) t[band.str()] = curve_json(c);
    curves[id] = t;
  }
  const auto& du = b.du_model;
  return {{"ru_models", rus},
          {"du_model",
           {{"idle_power", du.idle_power},
            {"per_ru_idle_increment", du.per_ru_idle_increment},
            {"throughput_slope", du.throughput_slope},
            {"pod_visibility_gap", du.pod_visibility_gap}}},
          {"cu_model", {{"p_idle", b.cu_model.p_idle}, {"p_max", b.cu_model.p_max}}},
          {"load_rf_curves", curves}};
}

ModelBundle read_bundle(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ModelBundle b;
  const json& rus = r.array("ru_models");
  for (std::size_t i = 0; i < rus.size(); ++i) {
    const std::string p = idx(r.at("ru_models"), i);
    ObjectReader mr(rus[i], p);
    RuPowerModel m;
    m.model_id = mr.string("model_id");
    m.base_power = mr.nonneg("base_power");
    const json& chains = mr.need("chains");
    if (!chains.is_object()) ObjectReader::fail(mr.at("chains"), "expected an object keyed by band");
    for (auto it = chains.begin(); it != chains.end(); ++it) {
      const BandId band = ObjectReader::as_band(json(it.key()), mr.at("chains"));
      m.chains.emplace(band, read_chain(it.value(), mr.at("chains") + "." + it.key(), band));
    }
    if (const json* shared = mr.opt_object("shared_carriers")) {
      for (auto it = shared->begin(); it != shared->end(); ++it) {
        m.shared_carriers.emplace(BandId(it.key()),
                                  ObjectReader::as_band(it.value(), mr.at("shared_carriers") + "." + it.key()));
      }
    }
    mr.finish();
    if (!b.ru_models.emplace(m.model_id, m).second) {
      throw Error(ErrorKind::Duplicate, p + ": duplicate RU model " + m.model_id);
    }
  }
  {
    ObjectReader dr(r.need("du_model"), r.at("du_model"));
    b.du_model.idle_power = dr.nonneg("idle_power");
    b.du_model.per_ru_idle_increment = dr.opt_nonneg("per_ru_idle_increment").value_or(0.0);
    b.du_model.throughput_slope = dr.nonneg("throughput_slope");
    b.du_model.pod_visibility_gap = dr.opt_nonneg("pod_visibility_gap").value_or(0.0);
    dr.finish();
  }
  {
    ObjectReader cr(r.need("cu_model"), r.at("cu_model"));
    b.cu_model.p_idle = cr.nonneg("p_idle");
    b.cu_model.p_max = cr.nonneg("p_max");
    cr.finish();
  }
  if (const json* curves = r.opt_object("load_rf_curves")) {
    for (auto it = curves->begin(); it != curves->end(); ++it) {
      const std::string model_path = r.at("load_rf_curves") + "." + it.key();
      if (!it.value().is_object()) ObjectReader::fail(model_path, "expected an object keyed by band");
      auto& table = b.load_rf_curves[it.key()];
      for (auto ct = it.value().begin(); ct != it.value().end(); ++ct) {
        ObjectReader cr(ct.value(), model_path + "." + ct.key());
        LoadRfCurve c;
        c.rf_overhead = cr.nonneg("rf_overhead");
        c.rf_span = cr.nonneg("rf_span");
        c.layers = cr.integer("layers");
        c.gain_dbm = cr.number("gain");
        cr.finish();
        table.emplace(BandId(ct.key()), c);
      }
    }
  }
  r.finish();
  try {
    b.validate();
  } catch (const Error& e) {
    ObjectReader::fail(path, e.what());
  }
  return b;
}

// --- scenarios -------------------------------------------------------------

json scenario_json(const ScenarioConfig& s) {
  json rus = json::array();
  std::vector<CarrierSpec> catalog;
  std::set<BandId> seen;
  for (const auto& ru : s.rus) {
    json acts = json::array();
    for (const auto& a : ru.carriers) {
      acts.push_back({{"carrier", a.carrier.band.str()},
                      {"tx_gain", a.tx_gain_dbm},
                      {"active_layers", a.active_layers},
                      {"dl_load", a.dl_load}});
      if (seen.insert(a.carrier.band).second) catalog.push_back(a.carrier);
    }
    json disabled = json::object();
    for (const auto& [band, n] : ru.disabled_chains) disabled[band.str()] = n;
    rus.push_back({{"ru_id", ru.ru_id}, {"ru_model_id", ru.ru_model_id}, {"carriers", acts}, {"disabled_chains", disabled}});
  }
  json carriers = json::array();
  for (const auto& c : catalog) carriers.push_back(carrier_json(c));
  return {{"carriers", carriers}, {"rus", rus}, {"n_rus_on_du", s.n_rus_on_du}, {"cu_utilization", s.cu_utilization}};
}

ScenarioConfig read_scenario(const json& j, const std::string& path, const std::vector<CarrierSpec>& fallback) {
  ObjectReader r(j, path);
  std::vector<CarrierSpec> catalog = fallback;
  if (const json* cs = r.opt_array("carriers")) catalog = read_carriers(*cs, r.at("carriers"));
  ScenarioConfig s;
  const json& rus = r.array("rus");
  for (std::size_t i = 0; i < rus.size(); ++i) {
    const std::string p = idx(r.at("rus"), i);
    ObjectReader rr(rus[i], p);
    RuActivation ru;
    ru.ru_id = rr.string("ru_id");
    ru.ru_model_id = rr.string("ru_model_id");
    const json& acts = rr.array("carriers");
    for (std::size_t k = 0; k < acts.size(); ++k) {
      const std::string ap = idx(rr.at("carriers"), k);
      ObjectReader ar(acts[k], ap);
      CarrierActivation a;
      const BandId band = ObjectReader::as_band(ar.need("carrier"), ar.at("carrier"));
      a.carrier = lookup_carrier(catalog, band, ar.at("carrier"));
      a.tx_gain_dbm = ar.number("tx_gain");
      a.active_layers = ar.integer_or("active_layers", a.carrier.layers);
      a.dl_load = ar.number_or("dl_load", 1.0);
      ar.finish();
      ru.carriers.push_back(std::move(a));
    }
    if (const json* d = rr.opt_object("disabled_chains")) {
      for (auto it = d->begin(); it != d->end(); ++it) {
        ru.disabled_chains[BandId(it.key())] =
            ObjectReader::as_int(it.value(), rr.at("disabled_chains") + "." + it.key());
      }
    }
    rr.finish();
    s.rus.push_back(std::move(ru));
  }
  s.n_rus_on_du = r.integer_or("n_rus_on_du", static_cast<int>(s.rus.size()));
  s.cu_utilization = r.number_or("cu_utilization", 0.0);
  r.finish();
  return s;
}

// --- inventory -------------------------------------------------------------

json inventory_json(const Inventory& inv) {
  json rus = json::array();
  for (const auto& ru : inv.rus) {
    json opts = json::array();
    for (const auto& o : ru.carriers) {
      opts.push_back({{"band", o.band.str()}, {"mimo_layers", o.mimo_layers}, {"gains", o.gains_dbm}});
    }
    rus.push_back({{"ru_id", ru.ru_id}, {"ru_model_id", ru.ru_model_id}, {"carriers", opts}});
  }
  json carriers = json::array();
  for (const auto& c : inv.carriers) carriers.push_back(carrier_json(c));
  return {{"carriers", carriers},
          {"rus", rus},
          {"du_max_rus", inv.du_max_rus},
          {"cu_utilization", inv.cu_utilization},
          {"du_cu_can_power_off", inv.du_cu_can_power_off}};
}

Inventory read_inventory(const json& j, const std::vector<CarrierSpec>& fallback) {
  ObjectReader r(j, "");
  Inventory inv;
  inv.carriers = fallback;
  if (const json* cs = r.opt_array("carriers")) inv.carriers = read_carriers(*cs, r.at("carriers"));
  const json& rus = r.array("rus");
  for (std::size_t i = 0; i < rus.size(); ++i) {
    ObjectReader rr(rus[i], idx(r.at("rus"), i));
    InventoryRu ru;
    ru.ru_id = rr.string("ru_id");
    ru.ru_model_id = rr.string("ru_model_id");
    const json& opts = rr.array("carriers");
    for (std::size_t k = 0; k < opts.size(); ++k) {
      ObjectReader orr(opts[k], idx(rr.at("carriers"), k));
      CarrierOption o;
      o.band = ObjectReader::as_band(orr.need("band"), orr.at("band"));
      const json& mimo = orr.array("mimo_layers");
      for (std::size_t m = 0; m < mimo.size(); ++m) {
        o.mimo_layers.push_back(ObjectReader::as_int(mimo[m], idx(orr.at("mimo_layers"), m)));
      }
      const json& gains = orr.array("gains");
      for (std::size_t g = 0; g < gains.size(); ++g) {
        o.gains_dbm.push_back(ObjectReader::as_number(gains[g], idx(orr.at("gains"), g)));
      }
      orr.finish();
      ru.carriers.push_back(std::move(o));
    }
    rr.finish();
    inv.rus.push_back(std::move(ru));
  }
  inv.du_max_rus = r.integer_or("du_max_rus", static_cast<int>(inv.rus.size()));
  inv.cu_utilization = r.number_or("cu_utilization", 0.0);
  inv.du_cu_can_power_off = r.boolean_or("du_cu_can_power_off", false);
  r.finish();
  return inv;
}

// --- dataset -----------------------------------------------------------------

const char* traffic_name(TrafficType t) { return t == TrafficType::Tcp ? "tcp" : "udp"; }

const char* pathloss_name(PathlossClass p) {
  switch (p) {
    case PathlossClass::Low: return "low";
    case PathlossClass::Medium: return "medium";
    case PathlossClass::High: return "high";
  }
  return "low";
}

void put_opt(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

json dataset_json(const Dataset& ds) {
  json carriers = json::array();
  for (const auto& c : ds.carriers) carriers.push_back(carrier_json(c));

  json radios = json::array();
  for (const auto& r : ds.radios) {
    json bands = json::array();
    for (const auto& b : r.carriers) bands.push_back(b.str());
    json chains = json::array();
    for (const auto& c : r.chains) {
      json cj{{"band", c.band.str()}, {"n_tx", c.n_tx}, {"max_rating", c.max_rating_dbm}};
      put_opt(cj, "disable_credit_per_chain", c.disable_credit_per_chain);
      chains.push_back(cj);
    }
    json shared = json::object();
    for (const auto& [carrier, chain] : r.shared_carriers) shared[carrier.str()] = chain.str();
    radios.push_back({{"model_id", r.model_id}, {"carriers", bands}, {"chains", chains}, {"shared_carriers", shared}});
  }

  json tcs = json::array();
  for (const auto& tc : ds.test_cases) {
    json cs = json::array();
    for (const auto& c : tc.carriers) {
      cs.push_back({{"band", c.band.str()}, {"dl_bandwidth", c.dl_bandwidth_mhz}, {"ul_bandwidth", c.ul_bandwidth_mhz}});
    }
    tcs.push_back({{"id", tc.id},
                   {"radio_types", tc.radio_types},
                   {"traffic_type", traffic_name(tc.traffic_type)},
                   {"dl_load", tc.dl_load_pct},
                   {"ul_load", tc.ul_load_pct},
                   {"direction", tc.direction},
                   {"n_ues", tc.n_ues},
                   {"carriers", cs},
                   {"mimo", tc.mimo},
                   {"gain", tc.gain_dbm},
                   {"n_cells", tc.n_cells},
                   {"n_sectors", tc.n_sectors},
                   {"pathloss", pathloss_name(tc.pathloss)}});
  }

  json records = json::array();
  for (const auto& rec : ds.records) {
    json per_ru = json::array();
    for (const auto& ru : rec.per_ru) {
      json bands = json::array();
      for (const auto& b : ru.bands) {
        bands.push_back({{"band", b.band.str()}, {"dl_throughput", b.dl_mbps}, {"ul_throughput", b.ul_mbps}});
      }
      json rj{{"ru_id", ru.ru_id}, {"ru_model_id", ru.ru_model_id}, {"bands", bands}};
      put_opt(rj, "external_power", ru.external_power);
      put_opt(rj, "self_reported_power", ru.self_reported_power);
      put_opt(rj, "rf_power", ru.rf_power);
      per_ru.push_back(rj);
    }
    json rj{{"test_case_id", rec.test_case_id}, {"group", rec.group}, {"per_ru", per_ru}};
    if (!rec.variant.empty()) rj["variant"] = rec.variant;
    put_opt(rj, "du_server_power", rec.du_server_power);
    put_opt(rj, "du_pod_power", rec.du_pod_power);
    put_opt(rj, "cu_power", rec.cu_power);
    put_opt(rj, "cu_utilization", rec.cu_utilization);
    put_opt(rj, "total_power", rec.total_power);
    if (rec.mcs) rj["mcs"] = *rec.mcs;
    if (!rec.rsrp_dbm.empty()) rj["rsrp"] = rec.rsrp_dbm;
    records.push_back(rj);
  }

  json idles = json::array();
  for (const auto& o : ds.idle_observations) {
    json bands = json::array();
    for (const auto& b : o.active_bands) bands.push_back(b.str());
    json oj{{"ru_model_id", o.ru_model_id}, {"active_bands", bands}, {"measured_power", o.measured_power}};
    if (!o.label.empty()) oj["label"] = o.label;
    idles.push_back(oj);
  }

  return {{"carriers", carriers},
          {"radios", radios},
          {"test_cases", tcs},
          {"records", records},
          {"idle_observations", idles},
          {"meta", {{"external_meter_quantum_w", ds.meta.external_meter_quantum_w}}}};
}

TrafficType read_traffic(const json& v, const std::string& path) {
  const std::string s = ObjectReader::as_string(v, path);
  if (s == "tcp" || s == "TCP") return TrafficType::Tcp;
  if (s == "udp" || s == "UDP") return TrafficType::Udp;
  ObjectReader::fail(path, "traffic_type must be tcp or udp");
}

PathlossClass read_pathloss(const json& v, const std::string& path) {
  const std::string s = ObjectReader::as_string(v, path);
  if (s == "low") return PathlossClass::Low;
  if (s == "medium") return PathlossClass::Medium;
  if (s == "high") return PathlossClass::High;
  ObjectReader::fail(path, "pathloss must be low, medium or high");
}

Dataset read_dataset(const json& j) {
  ObjectReader r(j, "");
  Dataset ds;
  if (const json* cs = r.opt_array("carriers")) ds.carriers = read_carriers(*cs, r.at("carriers"));

  if (const json* radios = r.opt_array("radios")) {
    for (std::size_t i = 0; i < radios->size(); ++i) {
      ObjectReader rr((*radios)[i], idx(r.at("radios"), i));
      RadioSpec radio;
      radio.model_id = rr.string("model_id");
      const json& bands = rr.array("carriers");
      for (std::size_t k = 0; k < bands.size(); ++k) {
        radio.carriers.push_back(ObjectReader::as_band(bands[k], idx(rr.at("carriers"), k)));
      }
      const json& chains = rr.array("chains");
      for (std::size_t k = 0; k < chains.size(); ++k) {
        ObjectReader cr(chains[k], idx(rr.at("chains"), k));
        ChainSpec c;
        c.band = ObjectReader::as_band(cr.need("band"), cr.at("band"));
        c.n_tx = cr.integer_or("n_tx", 4);
        c.max_rating_dbm = cr.number_or("max_rating", 46.0);
        c.disable_credit_per_chain = cr.opt_nonneg("disable_credit_per_chain");
        cr.finish();
        radio.chains.push_back(c);
      }
      if (const json* shared = rr.opt_object("shared_carriers")) {
        for (auto it = shared->begin(); it != shared->end(); ++it) {
          radio.shared_carriers.emplace(BandId(it.key()),
                                        ObjectReader::as_band(it.value(), rr.at("shared_carriers") + "." + it.key()));
        }
      }
      rr.finish();
      ds.radios.push_back(std::move(radio));
    }
  }

  if (const json* tcs = r.opt_array("test_cases")) {
    for (std::size_t i = 0; i < tcs->size(); ++i) {
      ObjectReader tr((*tcs)[i], idx(r.at("test_cases"), i));
      TestCaseDefinition tc;
      tc.id = tr.string("id");
      const json& types = tr.array("radio_types");
      for (std::size_t k = 0; k < types.size(); ++k) {
        tc.radio_types.push_back(ObjectReader::as_string(types[k], idx(tr.at("radio_types"), k)));
      }
      if (const json* t = tr.find("traffic_type")) tc.traffic_type = read_traffic(*t, tr.at("traffic_type"));
      tc.dl_load_pct = tr.number_or("dl_load", 100.0);
      tc.ul_load_pct = tr.number_or("ul_load", 100.0);
      tc.direction = tr.string_or("direction", tc.direction);
      tc.n_ues = tr.integer_or("n_ues", 1);
      const json& cs = tr.array("carriers");
      for (std::size_t k = 0; k < cs.size(); ++k) {
        ObjectReader cr(cs[k], idx(tr.at("carriers"), k));
        TestCarrier c;
        c.band = ObjectReader::as_band(cr.need("band"), cr.at("band"));
        c.dl_bandwidth_mhz = cr.nonneg("dl_bandwidth");
        c.ul_bandwidth_mhz = cr.opt_nonneg("ul_bandwidth").value_or(0.0);
        cr.finish();
        tc.carriers.push_back(c);
      }
      if (const json* mimo = tr.opt_object("mimo")) {
        for (auto it = mimo->begin(); it != mimo->end(); ++it) {
          tc.mimo[it.key()] = ObjectReader::as_int(it.value(), tr.at("mimo") + "." + it.key());
        }
      }
      tc.gain_dbm = tr.number_or("gain", 37.0);
      tc.n_cells = tr.integer_or("n_cells", 1);
      tc.n_sectors = tr.integer_or("n_sectors", 1);
      if (const json* p = tr.find("pathloss")) tc.pathloss = read_pathloss(*p, tr.at("pathloss"));
      tr.finish();
      try {
        tc.validate();
      } catch (const Error& e) {
        ObjectReader::fail(idx(r.at("test_cases"), i), e.what());
      }
      ds.test_cases.push_back(std::move(tc));
    }
  }

  if (const json* recs = r.opt_array("records")) {
    for (std::size_t i = 0; i < recs->size(); ++i) {
      const std::string rp = idx(r.at("records"), i);
      ObjectReader rr((*recs)[i], rp);
      MeasurementRecord rec;
      rec.test_case_id = rr.string("test_case_id");
      rec.variant = rr.string_or("variant", "");
      rec.group = rr.string_or("group", rec.group);
      const json& per_ru = rr.array("per_ru");
      for (std::size_t k = 0; k < per_ru.size(); ++k) {
        ObjectReader ur(per_ru[k], idx(rr.at("per_ru"), k));
        RuMeasurement ru;
        ru.ru_id = ur.string("ru_id");
        ru.ru_model_id = ur.string("ru_model_id");
        const json& bands = ur.array("bands");
        for (std::size_t b = 0; b < bands.size(); ++b) {
          ObjectReader br(bands[b], idx(ur.at("bands"), b));
          BandThroughput bt;
          bt.band = ObjectReader::as_band(br.need("band"), br.at("band"));
          bt.dl_mbps = br.opt_nonneg("dl_throughput").value_or(0.0);
          bt.ul_mbps = br.opt_nonneg("ul_throughput").value_or(0.0);
          br.finish();
          ru.bands.push_back(bt);
        }
        ru.external_power = ur.opt_nonneg("external_power");
        ru.self_reported_power = ur.opt_nonneg("self_reported_power");
        ru.rf_power = ur.opt_nonneg("rf_power");
        ur.finish();
        rec.per_ru.push_back(std::move(ru));
      }
      rec.du_server_power = rr.opt_nonneg("du_server_power");
      rec.du_pod_power = rr.opt_nonneg("du_pod_power");
      rec.cu_power = rr.opt_nonneg("cu_power");
      rec.cu_utilization = rr.opt_nonneg("cu_utilization");
      rec.total_power = rr.opt_nonneg("total_power");
      if (const json* m = rr.find("mcs")) rec.mcs = ObjectReader::as_int(*m, rr.at("mcs"));
      if (const json* rsrp = rr.opt_array("rsrp")) {
        for (std::size_t k = 0; k < rsrp->size(); ++k) {
          rec.rsrp_dbm.push_back(ObjectReader::as_number((*rsrp)[k], idx(rr.at("rsrp"), k)));
        }
      }
      rr.finish();
      try {
        rec.validate();
      } catch (const Error& e) {
        ObjectReader::fail(rp, e.what());
      }
      ds.records.push_back(std::move(rec));
    }
  }

  if (const json* idles = r.opt_array("idle_observations")) {
    for (std::size_t i = 0; i < idles->size(); ++i) {
      ObjectReader ir((*idles)[i], idx(r.at("idle_observations"), i));
      IdleMeasurement o;
      o.ru_model_id = ir.string("ru_model_id");
      const json& bands = ir.array("active_bands");
      for (std::size_t k = 0; k < bands.size(); ++k) {
        o.active_bands.insert(ObjectReader::as_band(bands[k], idx(ir.at("active_bands"), k)));
      }
      o.measured_power = ir.nonneg("measured_power");
      if (!(o.measured_power > 0.0)) ObjectReader::fail(ir.at("measured_power"), "must be > 0");
      o.label = ir.string_or("label", "");
      ir.finish();
      ds.idle_observations.push_back(std::move(o));
    }
  }

  if (const json* meta = r.opt_object("meta")) {
    ObjectReader mr(*meta, r.at("meta"));
    ds.meta.external_meter_quantum_w = mr.opt_nonneg("external_meter_quantum_w").value_or(5.0);
    mr.finish();
  }
  r.finish();
  if (ds.records.empty() && ds.idle_observations.empty() && ds.carriers.empty() && ds.test_cases.empty()) {
    throw Error(ErrorKind::EmptyDataset, "dataset contains no data");
  }
  ds.validate();
  return ds;
}

// --- reports -----------------------------------------------------------------

json breakdown_json(const PowerBreakdown& b) {
  return {{"per_ru", b.per_ru},      {"ru_total", b.ru_total},         {"du", b.du},
          {"cu", b.cu},              {"system_total", b.system_total}, {"total_rf", b.total_rf}};
}

json ee_json(const EeReport& r) {
  json per_band = json::object();
  for (const auto& [band, dl] : r.per_band_dl_mbps) per_band[band.str()] = dl;
  json j{{"label", r.label},
         {"total_dl", r.total_dl_mbps},
         {"total_ul", r.total_ul_mbps},
         {"breakdown", breakdown_json(r.breakdown)},
         {"ee_dl", r.ee_kbps_per_w},
         {"ee_dl_rounded", r.ee_rounded()},
         {"per_band_dl", per_band},
         {"per_ru_dl", r.per_ru_dl_mbps},
         {"basis", r.basis == EeBasis::Downlink ? "dl" : "dl+ul"}};
  if (!r.per_ru_rf_w.empty()) j["per_ru_rf"] = r.per_ru_rf_w;
  if (r.ru_efficiency) j["ru_efficiency"] = *r.ru_efficiency;
  return j;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string bundle_to_json(const ModelBundle& bundle) { return dump(bundle_json(bundle)); }

ModelBundle parse_bundle_json(const std::string& text) {
  const json j = parse_text(text);
  // A calibration report carries the bundle under "model"; accept either.
  if (j.is_object() && j.contains("model") && j.contains("underdetermined")) return read_bundle(j.at("model"), "model");
  return read_bundle(j, "");
}

std::string scenario_to_json(const ScenarioConfig& scenario) { return dump(scenario_json(scenario)); }

ScenarioConfig parse_scenario_json(const std::string& text, const std::vector<CarrierSpec>& catalog) {
  return read_scenario(parse_text(text), "", catalog);
}

std::string inventory_to_json(const Inventory& inventory) { return dump(inventory_json(inventory)); }

Inventory parse_inventory_json(const std::string& text, const std::vector<CarrierSpec>& catalog) {
  return read_inventory(parse_text(text), catalog);
}

Dataset parse_dataset_json(const std::string& text) { return read_dataset(parse_text(text)); }

std::string dataset_to_json(const Dataset& dataset) { return dump(dataset_json(dataset)); }

std::string calibration_report_to_json(const CalibrationReport& report) {
  json residuals = json::array();
  for (const auto& r : report.residuals) {
    residuals.push_back({{"fitter", r.fitter}, {"observation", r.observation}, {"residual", r.residual}});
  }
  return dump({{"model", bundle_json(report.bundle)},
               {"residuals", residuals},
               {"max_abs_residual", report.max_abs_residual()},
               {"underdetermined", report.underdetermined},
               {"notes", report.notes}});
}

std::string plan_result_to_json(const PlanResult& result) {
  return dump({{"chosen_id", result.chosen_id},
               {"chosen", scenario_json(result.chosen)},
               {"predicted", breakdown_json(result.predicted)},
               {"achieved_dl", result.achieved_dl_mbps},
               {"ee", result.ee_kbps_per_w},
               {"alternatives_considered", result.alternatives_considered}});
}

std::string ee_report_to_json(const EeReport& report) { return dump(ee_json(report)); }

std::string ee_reports_to_json(const std::vector<EeReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(ee_json(r));
  return dump(arr);
}

}  // namespace ranpower
