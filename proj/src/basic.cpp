#include "msca/basic.hpp"

namespace msca {

StageResult run_basic(CoverageState& state, StageGoal goal) {
  goal.validate();
  StageResult result;
  const auto& space = state.space();
  const DeficiencyMap deficiencies = compute_deficiencies(state, goal.beta);
  result.work += space.size();

  const auto k = static_cast<std::size_t>(space.factors());
  for (const Deficiency& d : deficiencies) {
    const auto cols = space.columns_of(d.rank);
    for (std::uint32_t copy = 0; copy < d.missing; ++copy) {
      Row row(k, kUnset);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        row[cols[i]] = space.value_at(d.rank, static_cast<int>(i));
      }
      fill_free_cells(state, row);
      append_counted(state, std::move(row), result);
    }
  }
  return result;
}

}  // namespace msca
