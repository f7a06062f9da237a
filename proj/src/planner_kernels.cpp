#include <cstdint>
#include <exception>

#include "planner_detail.hpp"

namespace ranpower {

std::vector<CandidateEvaluation> evaluate_candidates_serial(const CandidateSpace& space, double demand_mbps,
                                                            const ModelBundle& models) {
  std::vector<CandidateEvaluation> out(space.size());
  ScenarioConfig scratch;
  for (std::size_t i = 0; i < space.size(); ++i) {
    out[i] = detail::evaluate_candidate(space, i, demand_mbps, models, scratch);
  }
  return out;
}

std::vector<CandidateEvaluation> evaluate_candidates_parallel(const CandidateSpace& space, double demand_mbps,
                                                              const ModelBundle& models) {
  std::vector<CandidateEvaluation> out(space.size());
  const auto n = static_cast<std::int64_t>(space.size());
  std::exception_ptr failure;

#pragma omp parallel
  {
    ScenarioConfig scratch;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] =
            detail::evaluate_candidate(space, static_cast<std::size_t>(i), demand_mbps, models, scratch);
      } catch (...) {
#pragma omp critical(ranpower_planner_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }

  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ranpower
