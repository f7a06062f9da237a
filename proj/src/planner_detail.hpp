#pragma once

#include <cstddef>

#include "ranpower/planner.hpp"

namespace ranpower::detail {

// Decodes, loads and predicts candidate `index`. `scratch` is reused across
// calls to keep allocations out of the hot loop. Prediction errors (ratings,
// missing parameters) mark the candidate infeasible rather than throwing.
CandidateEvaluation evaluate_candidate(const CandidateSpace& space, std::size_t index, double demand_mbps,
                                       const ModelBundle& models, ScenarioConfig& scratch);

}  // namespace ranpower::detail
