#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msca/core.hpp"

namespace msca {

/// Raised when an array does not have the shape or alphabet its parameters
/// promise. Distinct from "valid array that is not covering".
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws DimensionError on a row of the wrong length or a symbol >= v.
void check_dimensions(const Array& array, const CAParams& params);

/// Coverage count of every interaction rank, recounted from scratch by
/// testing each interaction against each row.
std::vector<std::uint32_t> brute_force_counts(const Array& array, const CAParams& params);

struct CoverageReport {
  bool covering = false;
  std::uint32_t lambda = 0;
  std::uint32_t min_coverage = 0;
  std::uint64_t deficient = 0;
  /// (interaction, count) for the first deficient interactions by rank.
  std::vector<std::pair<Interaction, std::uint32_t>> sample;
};

/// Checks index params.lambda. At most `sample_limit` deficient interactions
/// are listed in the report.
CoverageReport is_covering_array(const Array& array, const CAParams& params,
                                 std::size_t sample_limit = 100);

struct ProfileRow {
  std::size_t row = 0;
  std::uint64_t newly_covered = 0;
  std::uint64_t cumulative = 0;
};

/// Per row: how many interactions reach `lambda` coverage exactly there.
std::vector<ProfileRow> coverage_profile(const Array& array, const CAParams& params,
                                         std::uint32_t lambda);

/// Row index at which the interaction first reaches `lambda` coverage.
std::optional<std::size_t> first_covered_row(const Array& array, const Interaction& interaction,
                                             std::uint32_t lambda);

/// "row,newly_covered,cumulative"
std::string format_profile_csv(const std::vector<ProfileRow>& profile);

}  // namespace msca
