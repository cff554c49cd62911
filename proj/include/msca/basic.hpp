#pragma once

#include "msca/core.hpp"
#include "msca/stage.hpp"

namespace msca {

/// Adaptive basic stage. For every interaction missing d coverage units at
/// stage entry, appends d rows that each contain it; all other cells take the
/// column's least frequent symbol at the time the row is built. Deficiencies
/// are frozen at entry, so the stage adds exactly
/// sum_I max(0, beta - count_I) rows.
StageResult run_basic(CoverageState& state, StageGoal goal);

}  // namespace msca
