#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "ranpower/dataset.hpp"
#include "ranpower/error.hpp"

namespace ranpower {

namespace {

const std::vector<std::string> kColumns = {
    "test_case_id", "variant",        "group",       "ru_id",          "ru_model_id",
    "band",         "dl_throughput",  "ul_throughput", "external_power", "self_reported_power",
    "rf_power",     "du_server_power", "du_pod_power", "cu_power",       "cu_utilization",
    "total_power",  "mcs"};

struct Cell {
  std::string text;
  std::size_t column = 0;  // 1-based character column of the field start
};

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& why) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + why);
}

// RFC 4180 fields: quoted fields may hold commas, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<Cell>>> split_rows(const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<Cell>>> rows;
  std::vector<Cell> row;
  Cell cell{"", 1};
  std::size_t line = 1, col = 1, row_line = 1;
  bool quoted = false, closed = false, started = false;
  auto end_cell = [&] {
    row.push_back(cell);
    cell = Cell{"", col};
    quoted = closed = started = false;
  };
  auto end_row = [&] {
    end_cell();
    if (!(row.size() == 1 && row[0].text.empty())) rows.emplace_back(row_line, row);
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell.text += '"';
        ++i;
        col += 2;
      } else if (c == '"') {
        quoted = false;
        closed = true;
        ++col;
      } else if (c == '\n') {
        cell.text += c;
        ++line;
        col = 1;
      } else {
        cell.text += c;
        ++col;
      }
      continue;
    }
    if (c == ',') {
      ++col;
      end_cell();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      ++line;
      col = 1;
      end_row();
      cell.column = 1;
      row_line = line;
    } else if (closed) {
      parse_fail(line, col, "unexpected character after closing quote");
    } else if (c == '"' && !started) {
      quoted = started = true;
      ++col;
    } else {
      cell.text += c;
      started = true;
      ++col;
    }
  }
  if (quoted) parse_fail(line, col, "unterminated quoted field");
  if (started || !row.empty()) end_row();
  return rows;
}

std::optional<double> number(const Cell& cell, std::size_t line, const std::string& name) {
  if (cell.text.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = cell.text.data();
  const char* last = first + cell.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_fail(line, cell.column, name + ": not a number '" + cell.text + "'");
  if (v < 0.0) throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ": " + name + " must be >= 0");
  return v;
}

void merge(std::optional<double>& slot, const std::optional<double>& v, std::size_t line, const std::string& name) {
  if (!v) return;
  if (slot && *slot != *v) {
    throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ": " + name + " disagrees with an earlier row");
  }
  slot = v;
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << *v;
  return ss.str();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text, const Dataset& definitions) {
  const auto rows = split_rows(text);
  if (rows.empty()) throw Error(ErrorKind::EmptyDataset, "CSV input is empty");

  std::map<std::string, std::size_t> col_of;
  const auto& header = rows.front().second;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i].text;
    if (std::find(kColumns.begin(), kColumns.end(), name) == kColumns.end()) {
      parse_fail(rows.front().first, header[i].column, "unknown column '" + name + "'");
    }
    if (!col_of.emplace(name, i).second) parse_fail(rows.front().first, header[i].column, "duplicate column '" + name + "'");
  }
  for (const char* required : {"test_case_id", "ru_id", "ru_model_id"}) {
    if (!col_of.count(required)) parse_fail(rows.front().first, 1, std::string("missing column '") + required + "'");
  }

  Dataset ds;
  ds.carriers = definitions.carriers;
  ds.radios = definitions.radios;
  ds.test_cases = definitions.test_cases;
  ds.meta = definitions.meta;

  std::map<std::string, std::size_t> record_at;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != header.size()) {
      parse_fail(line, 1, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()));
    }
    auto get = [&](const char* name) -> Cell {
      auto it = col_of.find(name);
      return it == col_of.end() ? Cell{} : cells[it->second];
    };
    auto num = [&](const char* name) { return number(get(name), line, name); };

    MeasurementRecord probe;
    probe.test_case_id = get("test_case_id").text;
    probe.variant = get("variant").text;
    if (probe.test_case_id.empty()) parse_fail(line, get("test_case_id").column, "test_case_id is empty");
    auto [it, fresh] = record_at.emplace(probe.key(), ds.records.size());
    if (fresh) {
      const std::string group = get("group").text;
      if (!group.empty()) probe.group = group;
      ds.records.push_back(probe);
    }
    auto& rec = ds.records[it->second];
    merge(rec.du_server_power, num("du_server_power"), line, "du_server_power");
    merge(rec.du_pod_power, num("du_pod_power"), line, "du_pod_power");
    merge(rec.cu_power, num("cu_power"), line, "cu_power");
    merge(rec.cu_utilization, num("cu_utilization"), line, "cu_utilization");
    merge(rec.total_power, num("total_power"), line, "total_power");
    if (auto m = num("mcs")) rec.mcs = static_cast<int>(*m);

    const std::string ru_id = get("ru_id").text;
    if (ru_id.empty()) parse_fail(line, get("ru_id").column, "ru_id is empty");
    auto ru_it = std::find_if(rec.per_ru.begin(), rec.per_ru.end(), [&](auto& ru) { return ru.ru_id == ru_id; });
    if (ru_it == rec.per_ru.end()) {
      RuMeasurement ru;
      ru.ru_id = ru_id;
      ru.ru_model_id = get("ru_model_id").text;
      rec.per_ru.push_back(ru);
      ru_it = rec.per_ru.end() - 1;
    }
    merge(ru_it->external_power, num("external_power"), line, "external_power");
    merge(ru_it->self_reported_power, num("self_reported_power"), line, "self_reported_power");
    merge(ru_it->rf_power, num("rf_power"), line, "rf_power");
    const std::string band = get("band").text;
    if (!band.empty()) {
      ru_it->bands.push_back({BandId(band), num("dl_throughput").value_or(0.0), num("ul_throughput").value_or(0.0)});
    }
  }
  ds.validate();
  return ds;
}

std::string records_to_csv(const std::vector<MeasurementRecord>& records) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << "\n";
  for (const auto& rec : records) {
    for (const auto& ru : rec.per_ru) {
      auto row = [&](const BandThroughput* b) {
        const std::optional<double> mcs =
            rec.mcs ? std::optional<double>(static_cast<double>(*rec.mcs)) : std::nullopt;
        out << quote(rec.test_case_id) << ',' << quote(rec.variant) << ',' << quote(rec.group) << ','
            << quote(ru.ru_id) << ',' << quote(ru.ru_model_id) << ',' << (b ? quote(b->band.str()) : "") << ','
            << (b ? fmt(b->dl_mbps) : "") << ',' << (b ? fmt(b->ul_mbps) : "") << ',' << fmt(ru.external_power)
            << ',' << fmt(ru.self_reported_power) << ',' << fmt(ru.rf_power) << ',' << fmt(rec.du_server_power)
            << ',' << fmt(rec.du_pod_power) << ',' << fmt(rec.cu_power) << ',' << fmt(rec.cu_utilization) << ','
            << fmt(rec.total_power) << ',' << fmt(mcs) << "\n";
      };
      if (ru.bands.empty()) row(nullptr);
      for (const auto& b : ru.bands) row(&b);
    }
  }
  return out.str();
}

}  // namespace ranpower
