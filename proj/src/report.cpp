#include "ranpower/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

#include "ranpower/error.hpp"

namespace ranpower {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* pathloss_label(PathlossClass p) {
  switch (p) {
    case PathlossClass::Low: return "low";
    case PathlossClass::Medium: return "medium";
    case PathlossClass::High: return "high";
  }
  return "";
}

struct TypeColumns {
  std::string model_id;
  std::vector<BandId> bands;
};

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorKind::Schema, "unknown format '" + std::string(name) + "' (table, csv or json)");
}

std::string format_number(double value) {
  if (std::abs(value - std::round(value)) < 1e-9) {
    std::ostringstream ss;
    ss << static_cast<long long>(std::llround(value));
    return ss.str();
  }
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(std::abs(value) < 10.0 ? 4 : 2);
  ss << value;
  std::string s = ss.str();
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string render(const TableData& table, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Csv: {
      for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << csv_field(table.header[i]);
      out << "\n";
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\n";
      }
      break;
    }
    case OutputFormat::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) obj[table.header[i]] = row[i];
        arr.push_back(nlohmann::json::parse(obj.dump()));
      }
      out << arr.dump(2) << "\n";
      break;
    }
    case OutputFormat::Table: {
      std::vector<std::size_t> width(table.header.size(), 0);
      for (std::size_t i = 0; i < table.header.size(); ++i) width[i] = table.header[i].size();
      for (const auto& row : table.rows)
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
      auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < width.size(); ++i) {
          const std::string& c = i < cells.size() ? cells[i] : std::string();
          if (i) s += "  ";
          s += i == 0 ? c + std::string(width[i] - c.size(), ' ') : std::string(width[i] - c.size(), ' ') + c;
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << "\n";
      };
      line(table.header);
      std::size_t total = 0;
      for (auto w : width) total += w;
      out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << "\n";
      for (const auto& row : table.rows) line(row);
      break;
    }
  }
  return out.str();
}

EnergyTable energy_table(const Dataset& dataset, const std::string& group) {
  EnergyTable out;
  const bool pathloss = group == "pathloss";

  std::vector<TypeColumns> types;
  for (const auto& radio : dataset.radios) types.push_back({radio.model_id, radio.carriers});
  std::sort(types.begin(), types.end(), [](auto& a, auto& b) { return a.model_id < b.model_id; });

  auto& header = out.table.header;
  header.push_back("test_case");
  if (pathloss) {
    for (const char* h : {"pathloss", "rsrp_dbm", "mcs", "total_dl", "total_power", "ee"}) header.push_back(h);
  } else {
    for (const auto& t : types) {
      for (const auto& b : t.bands) header.push_back(t.model_id + " " + b.str() + " dl");
      header.push_back(t.model_id + " dl");
    }
    header.push_back("total_dl");
    for (const auto& t : types) header.push_back(t.model_id + " rf");
    header.push_back("total_rf");
    for (const auto& t : types) header.push_back(t.model_id + " power");
    for (const char* h : {"all_rus", "du", "cu", "total_power", "ee"}) header.push_back(h);
  }

  for (const auto& rec : dataset.records) {
    if (rec.group != group) continue;
    EeReport report;
    try {
      report = ee_report(rec);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IncompleteRecord) throw;
      out.skipped.push_back(rec.key());
      continue;
    }
    std::vector<std::string> row{rec.key()};
    if (pathloss) {
      const auto& tc = dataset.test_case(rec.test_case_id);
      std::string rsrp;
      for (std::size_t i = 0; i < rec.rsrp_dbm.size(); ++i) rsrp += (i ? " & " : "") + format_number(rec.rsrp_dbm[i]);
      row.push_back(pathloss_label(tc.pathloss));
      row.push_back(rsrp);
      row.push_back(rec.mcs ? std::to_string(*rec.mcs) : "");
      row.push_back(format_number(report.total_dl_mbps));
      row.push_back(format_number(report.breakdown.system_total));
      row.push_back(std::to_string(report.ee_rounded()));
    } else {
      struct Acc {
        int n = 0;
        std::map<BandId, double> band_dl;
        double dl = 0.0, power = 0.0, rf = 0.0;
        bool rf_known = true;
      };
      std::map<std::string, Acc> acc;
      for (const auto& ru : rec.per_ru) {
        auto& a = acc[ru.ru_model_id];
        ++a.n;
        for (const auto& b : ru.bands) {
          a.band_dl[b.band] += b.dl_mbps;
          a.dl += b.dl_mbps;
        }
        a.power += ru.external_power.value_or(0.0);
        if (ru.rf_power) {
          a.rf += *ru.rf_power;
        } else {
          a.rf_known = false;
        }
      }
      auto mean = [](double sum, int n) { return format_number(sum / n); };
      for (const auto& t : types) {
        auto it = acc.find(t.model_id);
        for (const auto& b : t.bands) {
          std::string cell;
          if (it != acc.end()) {
            if (auto bt = it->second.band_dl.find(b); bt != it->second.band_dl.end()) cell = mean(bt->second, it->second.n);
          }
          row.push_back(cell);
        }
        row.push_back(it == acc.end() ? "" : mean(it->second.dl, it->second.n));
      }
      row.push_back(format_number(report.total_dl_mbps));
      bool all_rf = true;
      for (const auto& t : types) {
        auto it = acc.find(t.model_id);
        if (it != acc.end() && !it->second.rf_known) all_rf = false;
        row.push_back(it == acc.end() || !it->second.rf_known ? "" : mean(it->second.rf, it->second.n));
      }
      row.push_back(all_rf ? format_number(report.breakdown.total_rf) : "");
      for (const auto& t : types) {
        auto it = acc.find(t.model_id);
        row.push_back(it == acc.end() ? "" : mean(it->second.power, it->second.n));
      }
      row.push_back(format_number(report.breakdown.ru_total));
      row.push_back(format_number(report.breakdown.du));
      row.push_back(format_number(report.breakdown.cu));
      row.push_back(format_number(report.breakdown.system_total));
      row.push_back(std::to_string(report.ee_rounded()));
    }
    out.table.rows.push_back(std::move(row));
    out.reports.push_back(std::move(report));
  }
  return out;
}

TableData breakdown_table(const EeReport& report) {
  TableData t;
  t.header = {"component", "value"};
  for (const auto& [id, w] : report.breakdown.per_ru) t.rows.push_back({"ru " + id + " power_w", format_number(w)});
  const auto& b = report.breakdown;
  t.rows.push_back({"ru_total_w", format_number(b.ru_total)});
  t.rows.push_back({"du_w", format_number(b.du)});
  t.rows.push_back({"cu_w", format_number(b.cu)});
  t.rows.push_back({"system_total_w", format_number(b.system_total)});
  t.rows.push_back({"total_rf_w", format_number(b.total_rf)});
  t.rows.push_back({"total_dl_mbps", format_number(report.total_dl_mbps)});
  t.rows.push_back({"ee_kbps_per_w", std::to_string(report.ee_rounded())});
  if (report.ru_efficiency) t.rows.push_back({"ru_efficiency", format_number(*report.ru_efficiency)});
  return t;
}

TableData plan_table(const PlanResult& result) {
  TableData t;
  t.header = {"ru", "carrier", "layers", "gain_dbm", "dl_load", "dl_mbps", "ru_power_w"};
  for (const auto& ru : result.chosen.rus) {
    const auto it = result.predicted.per_ru.find(ru.ru_id);
    const std::string power = it == result.predicted.per_ru.end() ? "" : format_number(it->second);
    for (std::size_t i = 0; i < ru.carriers.size(); ++i) {
      const auto& a = ru.carriers[i];
      t.rows.push_back({ru.ru_id, a.carrier.band.str(), std::to_string(a.active_layers), format_number(a.tx_gain_dbm),
                        format_number(a.dl_load), format_number(a.served_dl_mbps()), i == 0 ? power : ""});
    }
  }
  const auto& b = result.predicted;
  t.rows.push_back({"ru_total", "", "", "", "", "", format_number(b.ru_total)});
  t.rows.push_back({"du", "", "", "", "", "", format_number(b.du)});
  t.rows.push_back({"cu", "", "", "", "", "", format_number(b.cu)});
  t.rows.push_back({"system_total", "", "", "", "", format_number(result.achieved_dl_mbps), format_number(b.system_total)});
  return t;
}

TableData calibration_table(const CalibrationReport& report) {
  TableData t;
  t.header = {"parameter", "value"};
  for (const auto& [id, m] : report.bundle.ru_models) {
    t.rows.push_back({id + ".base_power", format_number(m.base_power)});
    for (const auto& [band, c] : m.chains) {
      t.rows.push_back({id + "." + band.str() + ".idle_power", format_number(c.idle_power)});
      for (const auto& p : c.efficiency.points()) {
        t.rows.push_back({id + "." + band.str() + ".efficiency@" + format_number(p.per_chain_tx_power_dbm),
                          format_number(p.efficiency)});
      }
    }
  }
  for (const auto& [id, table] : report.bundle.load_rf_curves) {
    for (const auto& [band, c] : table) {
      t.rows.push_back({id + "." + band.str() + ".rf_overhead", format_number(c.rf_overhead)});
      t.rows.push_back({id + "." + band.str() + ".rf_span", format_number(c.rf_span)});
    }
  }
  const auto& du = report.bundle.du_model;
  t.rows.push_back({"du.idle_power", format_number(du.idle_power)});
  t.rows.push_back({"du.per_ru_idle_increment", format_number(du.per_ru_idle_increment)});
  t.rows.push_back({"du.throughput_slope", format_number(du.throughput_slope)});
  t.rows.push_back({"du.pod_visibility_gap", format_number(du.pod_visibility_gap)});
  t.rows.push_back({"cu.p_idle", format_number(report.bundle.cu_model.p_idle)});
  t.rows.push_back({"cu.p_max", format_number(report.bundle.cu_model.p_max)});
  t.rows.push_back({"max_abs_residual", format_number(report.max_abs_residual())});
  for (const auto& p : report.underdetermined) t.rows.push_back({p, "underdetermined"});
  return t;
}

}  // namespace ranpower
