#pragma once

#include <cstdint>
#include <vector>

#include "msca/core.hpp"

namespace msca {

/// Entry guarantee alpha and exit guarantee beta of one stage: every
/// interaction is covered at least alpha times on entry and at least beta
/// times on exit.
struct StageGoal {
  std::uint32_t alpha = 0;
  std::uint32_t beta = 1;

  /// Throws std::invalid_argument unless alpha < beta.
  void validate() const;
};

/// Interaction rank paired with the coverage it still lacks (always >= 1).
struct Deficiency {
  Rank rank = 0;
  std::uint32_t missing = 0;

  bool operator==(const Deficiency&) const = default;
};

/// Deficient interactions sorted by rank.
using DeficiencyMap = std::vector<Deficiency>;

DeficiencyMap compute_deficiencies(const CoverageState& state, std::uint32_t beta);
std::uint64_t total_missing(const DeficiencyMap& deficiencies);

/// Outcome of running one stage.
struct StageResult {
  std::size_t rows_added = 0;
  /// Deterministic work units: interaction-coverage evaluations plus graph
  /// edge visits.
  std::uint64_t work = 0;
};

inline constexpr Symbol kUnset = static_cast<Symbol>(-1);

/// Replaces every kUnset cell with the column's least frequent symbol.
void fill_free_cells(const CoverageState& state, Row& row);

/// Appends a row and charges C(k, t) work units to the result.
void append_counted(CoverageState& state, Row row, StageResult& result);

}  // namespace msca
