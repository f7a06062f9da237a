#include "ranpower/units.hpp"

#include <cmath>
#include <string>

#include "ranpower/error.hpp"

namespace ranpower {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::RatingExceeded: return "rating-exceeded";
    case ErrorKind::MissingParameter: return "missing-parameter";
    case ErrorKind::InconsistentModel: return "inconsistent-model";
    case ErrorKind::ConstraintViolation: return "constraint-violation";
    case ErrorKind::Underdetermined: return "under-determined";
    case ErrorKind::NonPhysical: return "non-physical";
    case ErrorKind::AmbiguousAttribution: return "ambiguous-attribution";
    case ErrorKind::IncompleteRecord: return "incomplete-record";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::EmptyDataset: return "empty-dataset";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) {
    throw Error(ErrorKind::Domain,
                "watts_to_dbm: power must be positive, got " + std::to_string(watts));
  }
  return 30.0 + 10.0 * std::log10(watts);
}

}  // namespace ranpower
