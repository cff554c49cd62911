#include "msca/stage.hpp"

#include <string>

namespace msca {

void StageGoal::validate() const {
  if (alpha >= beta) {
    throw std::invalid_argument("stage goal requires alpha < beta, got alpha=" +
                                std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
}

DeficiencyMap compute_deficiencies(const CoverageState& state, std::uint32_t beta) {
  DeficiencyMap result;
  const auto counts = state.counts();
  for (Rank r = 0; r < counts.size(); ++r) {
    if (counts[r] < beta) {
      result.push_back({r, beta - counts[r]});
    }
  }
  return result;
}

std::uint64_t total_missing(const DeficiencyMap& deficiencies) {
  std::uint64_t total = 0;
  for (const auto& d : deficiencies) {
    total += d.missing;
  }
  return total;
}

void fill_free_cells(const CoverageState& state, Row& row) {
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (row[c] == kUnset) {
      row[c] = state.least_frequent_symbol(static_cast<int>(c));
    }
  }
}

void append_counted(CoverageState& state, Row row, StageResult& result) {
  state.append_row(std::move(row));
  ++result.rows_added;
  result.work += state.space().column_set_count();
}

}  // namespace msca
