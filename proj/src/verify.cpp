#include "msca/verify.hpp"

#include <algorithm>
#include <sstream>

namespace msca {

void check_dimensions(const Array& array, const CAParams& params) {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw DimensionError(e.what());
  }
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (array[i].size() != static_cast<std::size_t>(params.k)) {
      throw DimensionError("row " + std::to_string(i) + " has " + std::to_string(array[i].size()) +
                           " columns, expected " + std::to_string(params.k));
    }
    for (std::size_t c = 0; c < array[i].size(); ++c) {
      if (array[i][c] >= params.v) {
        throw DimensionError("row " + std::to_string(i) + " column " + std::to_string(c) +
                             ": symbol " + std::to_string(array[i][c]) + " >= v=" +
                             std::to_string(params.v));
      }
    }
  }
}

std::vector<std::uint32_t> brute_force_counts(const Array& array, const CAParams& params) {
  check_dimensions(array, params);
  const InteractionSpace space(params);
  std::vector<std::uint32_t> counts(space.size(), 0);
  for (Rank r = 0; r < space.size(); ++r) {
    const Interaction interaction = space.unrank(r);
    for (const Row& row : array) {
      if (row_covers(row, interaction)) {
        ++counts[r];
      }
    }
  }
  return counts;
}

CoverageReport is_covering_array(const Array& array, const CAParams& params,
                                 std::size_t sample_limit) {
  const auto counts = brute_force_counts(array, params);
  const InteractionSpace space(params);
  CoverageReport report;
  report.lambda = static_cast<std::uint32_t>(params.lambda);
  report.min_coverage = counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
  for (Rank r = 0; r < counts.size(); ++r) {
    if (counts[r] < report.lambda) {
      ++report.deficient;
      if (report.sample.size() < sample_limit) {
        report.sample.emplace_back(space.unrank(r), counts[r]);
      }
    }
  }
  report.covering = report.deficient == 0;
  return report;
}

std::vector<ProfileRow> coverage_profile(const Array& array, const CAParams& params,
                                         std::uint32_t lambda) {
  if (lambda == 0) {
    throw std::invalid_argument("profile index must be >= 1");
  }
  check_dimensions(array, params);
  const InteractionSpace space(params);
  std::vector<std::uint32_t> counts(space.size(), 0);
  std::vector<ProfileRow> profile;
  profile.reserve(array.size());
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < array.size(); ++i) {
    std::uint64_t fresh = 0;
    space.for_each_covered(array[i], [&](Rank r) {
      if (++counts[r] == lambda) {
        ++fresh;
      }
    });
    cumulative += fresh;
    profile.push_back({i, fresh, cumulative});
  }
  return profile;
}

std::optional<std::size_t> first_covered_row(const Array& array, const Interaction& interaction,
                                             std::uint32_t lambda) {
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (row_covers(array[i], interaction) && ++seen == lambda) {
      return i;
    }
  }
  return std::nullopt;
}

std::string format_profile_csv(const std::vector<ProfileRow>& profile) {
  std::ostringstream os;
  os << "row,newly_covered,cumulative\n";
  for (const auto& p : profile) {
    os << p.row << ',' << p.newly_covered << ',' << p.cumulative << '\n';
  }
  return os.str();
}

}  // namespace msca
