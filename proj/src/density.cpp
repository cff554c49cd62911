#include "msca/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace msca {
namespace {

constexpr std::uint64_t kDirectLimit = 1000;

double binomial_term(std::uint64_t n, std::uint64_t i, double p) {
  if (n <= kDirectLimit) {
    double coeff = 1.0;
    for (std::uint64_t j = 1; j <= i; ++j) {
      coeff = coeff * static_cast<double>(n - i + j) / static_cast<double>(j);
    }
    return coeff * std::pow(p, static_cast<double>(i)) *
           std::pow(1.0 - p, static_cast<double>(n - i));
  }
  const double nd = static_cast<double>(n);
  const double id = static_cast<double>(i);
  const double log_term = std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) -
                          std::lgamma(nd - id + 1.0) + id * std::log(p) +
                          (nd - id) * std::log1p(-p);
  return std::exp(log_term);
}

/// (missing, number of interactions) pairs.
std::vector<std::pair<std::uint32_t, std::uint64_t>> histogram(const DeficiencyMap& deficiencies) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& d : deficiencies) {
    ++counts[d.missing];
  }
  return {counts.begin(), counts.end()};
}

double grouped_expectation(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& groups,
                           std::uint64_t n, double p) {
  double total = 0.0;
  for (const auto& [missing, count] : groups) {
    total += static_cast<double>(count) * binomial_lower_tail(n, missing, p);
  }
  return total;
}

}  // namespace

double binomial_lower_tail(std::uint64_t n, std::uint32_t d, double p) {
  if (d == 0) {
    return 0.0;
  }
  if (p >= 1.0) {
    return n < d ? 1.0 : 0.0;
  }
  const std::uint64_t top = std::min<std::uint64_t>(d - 1, n);
  double total = 0.0;
  for (std::uint64_t i = 0; i <= top; ++i) {
    total += binomial_term(n, i, p);
  }
  return std::min(total, 1.0);
}

double density_expectation(const DeficiencyMap& deficiencies, std::uint64_t n, double p) {
  return grouped_expectation(histogram(deficiencies), n, p);
}

std::uint64_t initial_row_estimate(const DeficiencyMap& deficiencies, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("coverage probability must lie in (0, 1]");
  }
  const auto groups = histogram(deficiencies);
  if (grouped_expectation(groups, 0, p) < 1.0) {
    return 0;
  }
  // The expectation is non-increasing in n: gallop to a bracket, then bisect.
  std::uint64_t low = 0;  // E(low) >= 1
  std::uint64_t high = 1;
  while (grouped_expectation(groups, high, p) >= 1.0) {
    low = high;
    high *= 2;
  }
  while (high - low > 1) {
    const std::uint64_t mid = low + (high - low) / 2;
    if (grouped_expectation(groups, mid, p) < 1.0) {
      high = mid;
    } else {
      low = mid;
    }
  }
  return high;
}

StageResult run_density(CoverageState& state, StageGoal goal) {
  goal.validate();
  StageResult result;
  const auto& space = state.space();
  const auto t = static_cast<std::size_t>(space.strength());
  const auto k = static_cast<std::size_t>(space.factors());
  const auto v = static_cast<Symbol>(space.levels());
  const double p = 1.0 / static_cast<double>(space.tuples_per_set());

  DeficiencyMap deficient = compute_deficiencies(state, goal.beta);
  result.work += space.size();

  // A cell fixed to a wrong value rules the interaction out of the row; with
  // u of its columns still open the row covers it with probability v^-u.
  std::vector<double> cover_probability(t + 1);
  for (std::size_t u = 0; u <= t; ++u) {
    cover_probability[u] = std::pow(static_cast<double>(v), -static_cast<double>(u));
  }

  std::vector<Symbol> values;
  std::vector<std::uint32_t> fixed;
  std::vector<bool> blocked;
  std::vector<double> tail_now;
  std::vector<double> tail_after;

  while (!deficient.empty()) {
    const std::uint64_t budget = initial_row_estimate(deficient, p);
    result.work += deficient.size();
    const std::uint64_t rest = budget > 0 ? budget - 1 : 0;

    std::uint32_t max_missing = 0;
    for (const auto& d : deficient) {
      max_missing = std::max(max_missing, d.missing);
    }
    // tail_now[d]: still deficient if this row misses; tail_after[d]: if it hits.
    tail_now.assign(max_missing + 1, 0.0);
    tail_after.assign(max_missing + 1, 0.0);
    for (std::uint32_t d = 1; d <= max_missing; ++d) {
      tail_now[d] = binomial_lower_tail(rest, d, p);
      tail_after[d] = binomial_lower_tail(rest, d - 1, p);
    }

    const std::size_t count = deficient.size();
    values.resize(count * t);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        values[i * t + j] = space.value_at(deficient[i].rank, static_cast<int>(j));
      }
    }
    fixed.assign(count, 0);
    blocked.assign(count, false);

    Row row(k, kUnset);
    for (std::size_t c = 0; c < k; ++c) {
      Symbol best_symbol = 0;
      double best_expectation = 0.0;
      for (Symbol s = 0; s < v; ++s) {
        double expectation = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
          const std::uint32_t missing = deficient[i].missing;
          if (blocked[i]) {
            expectation += tail_now[missing];
            continue;
          }
          std::uint32_t matched = fixed[i];
          bool conflict = false;
          const auto cols = space.columns_of(deficient[i].rank);
          for (std::size_t j = 0; j < t; ++j) {
            if (static_cast<std::size_t>(cols[j]) == c) {
              if (values[i * t + j] == s) {
                ++matched;
              } else {
                conflict = true;
              }
              break;
            }
          }
          if (conflict) {
            expectation += tail_now[missing];
            continue;
          }
          const double q = cover_probability[t - matched];
          expectation += q * tail_after[missing] + (1.0 - q) * tail_now[missing];
        }
        result.work += count;
        if (s == 0 || expectation < best_expectation) {
          best_symbol = s;
          best_expectation = expectation;
        }
      }
      row[c] = best_symbol;
      for (std::size_t i = 0; i < count; ++i) {
        const auto cols = space.columns_of(deficient[i].rank);
        for (std::size_t j = 0; j < t; ++j) {
          if (static_cast<std::size_t>(cols[j]) == c) {
            if (values[i * t + j] == best_symbol) {
              ++fixed[i];
            } else {
              blocked[i] = true;
            }
            break;
          }
        }
      }
    }

    bool progress = false;
    for (std::size_t i = 0; i < count; ++i) {
      if (!blocked[i] && fixed[i] == t) {
        progress = true;
        break;
      }
    }
    if (!progress) {
      // Fall back to a row through the first deficient interaction.
      std::fill(row.begin(), row.end(), kUnset);
      const auto cols = space.columns_of(deficient.front().rank);
      for (std::size_t j = 0; j < t; ++j) {
        row[cols[j]] = values[j];
      }
      fill_free_cells(state, row);
    }

    append_counted(state, std::move(row), result);
    std::erase_if(deficient, [&](Deficiency& d) {
      const std::uint32_t now = state.count(d.rank);
      d.missing = now >= goal.beta ? 0 : goal.beta - now;
      return d.missing == 0;
    });
  }
  return result;
}

}  // namespace msca
