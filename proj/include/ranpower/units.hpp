#pragma once

namespace ranpower {

// Power unit bridge. Model arithmetic is done in watts; dBm only shows up at
// configuration boundaries (Tx gain settings, efficiency curve abscissae).
double dbm_to_watts(double dbm);

// Throws Error(Domain) for non-positive input.
double watts_to_dbm(double watts);

}  // namespace ranpower
