#pragma once

#include <string>

#include "ranpower/dataset.hpp"
#include "ranpower/planner.hpp"

namespace ranpower {

// Built-in measurement set: carrier table, Type-A / Type-B radios, the
// test-case matrix, the Type-A idle readings and every energy-efficiency
// table row (group "energy") plus the pathloss rows (group "pathloss").
const Dataset& embedded_fixtures();

// Three Type-A and three Type-B RUs behind one DU, every carrier at 37 dBm.
Inventory fixture_inventory();

// The deployment a fixture record ran under, e.g. "14" or "27".
ScenarioConfig fixture_scenario(const std::string& record_key);

}  // namespace ranpower
