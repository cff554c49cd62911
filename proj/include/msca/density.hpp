#pragma once

#include <cstdint>

#include "msca/core.hpp"
#include "msca/stage.hpp"

namespace msca {

/// P(Binomial(n, p) < d): the chance that an interaction needing d more
/// coverage units is still deficient after n uniformly random rows.
/// Returns 0 for d == 0.
double binomial_lower_tail(std::uint64_t n, std::uint32_t d, double p);

/// Expected number of deficient interactions left after n uniformly random
/// rows: sum over the map of P(Binomial(n, p) < missing).
double density_expectation(const DeficiencyMap& deficiencies, std::uint64_t n, double p);

/// Smallest n >= 0 with density_expectation(deficiencies, n, p) < 1.
std::uint64_t initial_row_estimate(const DeficiencyMap& deficiencies, double p);

/// Deterministic density stage. Rows are built one at a time, column by
/// column, choosing for each cell the symbol that minimises the expected
/// number of interactions still short of beta once the rest of the row and
/// the remaining row budget are filled uniformly at random (ties: smallest
/// symbol). The budget is re-derived from the actual deficiencies after
/// every row.
StageResult run_density(CoverageState& state, StageGoal goal);

}  // namespace msca
