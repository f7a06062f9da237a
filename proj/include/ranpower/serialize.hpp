#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ranpower/calibration.hpp"
#include "ranpower/dataset.hpp"
#include "ranpower/metrics.hpp"
#include "ranpower/model.hpp"
#include "ranpower/planner.hpp"

namespace ranpower {

// Readers are strict: unknown fields are rejected with their JSON path,
// malformed text is a Parse error carrying line and column.

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle parse_bundle_json(const std::string& text);

// Carrier activations name a band; the spec is looked up in the document's
// own "carriers" list if present, else in `catalog`.
std::string scenario_to_json(const ScenarioConfig& scenario);
ScenarioConfig parse_scenario_json(const std::string& text, const std::vector<CarrierSpec>& catalog);

std::string inventory_to_json(const Inventory& inventory);
Inventory parse_inventory_json(const std::string& text, const std::vector<CarrierSpec>& catalog);

std::string calibration_report_to_json(const CalibrationReport& report);
std::string plan_result_to_json(const PlanResult& result);
std::string ee_report_to_json(const EeReport& report);
std::string ee_reports_to_json(const std::vector<EeReport>& reports);

}  // namespace ranpower
