#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ranpower/calibration.hpp"
#include "ranpower/dataset.hpp"
#include "ranpower/metrics.hpp"
#include "ranpower/planner.hpp"

namespace ranpower {

enum class OutputFormat { Table, Csv, Json };

OutputFormat parse_format(std::string_view name);

struct TableData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Aligned text, RFC 4180 CSV, or a JSON array of objects keyed by header.
std::string render(const TableData& table, OutputFormat format);

std::string format_number(double value);

struct EnergyTable {
  TableData table;
  std::vector<EeReport> reports;
  std::vector<std::string> skipped;  // record keys with missing power readings
};

// Rows for every record in `group`, in dataset order. The "energy" layout
// has per-radio-type DL, RF and power columns (per-RU means when a type
// appears more than once), then totals, DU, CU and EE. The "pathloss" layout
// lists pathloss class, RSRP, MCS, DL, total power and EE.
EnergyTable energy_table(const Dataset& dataset, const std::string& group);

TableData breakdown_table(const EeReport& report);
TableData plan_table(const PlanResult& result);
TableData calibration_table(const CalibrationReport& report);

}  // namespace ranpower
