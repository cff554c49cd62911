#include "msca/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace msca {

void CAParams::validate() const {
  if (t < 1 || t > k) {
    throw std::invalid_argument("strength t must satisfy 1 <= t <= k, got t=" +
                                std::to_string(t) + " k=" + std::to_string(k));
  }
  if (v < 2) {
    throw std::invalid_argument("level count v must be >= 2, got " + std::to_string(v));
  }
  if (v > std::numeric_limits<Symbol>::max()) {
    throw std::invalid_argument("level count v too large: " + std::to_string(v));
  }
  if (lambda < 1) {
    throw std::invalid_argument("index lambda must be >= 1, got " + std::to_string(lambda));
  }
}

std::string to_string(const CAParams& params) {
  std::ostringstream os;
  os << "t=" << params.t << " k=" << params.k << " v=" << params.v
     << " lambda=" << params.lambda;
  return os.str();
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) {
    return 0;
  }
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (int i = 1; i <= r; ++i) {
    // result * (n - r + i) / i is exact at every step; divide by the gcd
    // first so the intermediate product overflows only if the result does.
    std::uint64_t num = static_cast<std::uint64_t>(n - r + i);
    std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(result, num, &next)) {
      throw std::overflow_error("binomial coefficient C(" + std::to_string(n) + "," +
                                std::to_string(r) + ") overflows 64 bits");
    }
    result = next;
  }
  return result;
}

std::uint64_t interaction_count(const CAParams& params) {
  params.validate();
  std::uint64_t result = binomial(params.k, params.t);
  for (int i = 0; i < params.t; ++i) {
    if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(params.v), &result)) {
      throw std::overflow_error("interaction count overflows 64 bits for " + to_string(params));
    }
  }
  return result;
}

std::string to_string(const Interaction& interaction) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < interaction.entries.size(); ++i) {
    if (i != 0) {
      os << ',';
    }
    os << '(' << interaction.entries[i].column << ',' << interaction.entries[i].value << ')';
  }
  os << '}';
  return os.str();
}

bool row_covers(std::span<const Symbol> row, const Interaction& interaction) {
  return std::all_of(interaction.entries.begin(), interaction.entries.end(),
                     [&](const Entry& e) {
                       return static_cast<std::size_t>(e.column) < row.size() &&
                              row[e.column] == e.value;
                     });
}

InteractionSpace::InteractionSpace(const CAParams& params) : params_(params) {
  size_ = interaction_count(params);
  const auto t = static_cast<std::size_t>(params.t);
  column_set_count_ = static_cast<std::size_t>(binomial(params.k, params.t));
  value_weight_.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    value_weight_[i] = tuples_per_set_;
    tuples_per_set_ *= static_cast<std::uint64_t>(params.v);
  }

  // Walk the column sets lexicographically and drop each one at its colex rank.
  column_sets_.resize(column_set_count_ * t);
  std::vector<int> combo(t);
  std::iota(combo.begin(), combo.end(), 0);
  while (true) {
    std::uint64_t colex = 0;
    for (std::size_t i = 0; i < t; ++i) {
      colex += binomial(combo[i], static_cast<int>(i + 1));
    }
    std::copy(combo.begin(), combo.end(), column_sets_.begin() + static_cast<std::ptrdiff_t>(colex * t));

    std::size_t pos = t;
    while (pos > 0 && combo[pos - 1] == params.k - static_cast<int>(t - pos + 1)) {
      --pos;
    }
    if (pos == 0) {
      break;
    }
    ++combo[pos - 1];
    for (std::size_t j = pos; j < t; ++j) {
      combo[j] = combo[j - 1] + 1;
    }
  }
}

Rank InteractionSpace::rank(const Interaction& interaction) const {
  const auto& entries = interaction.entries;
  if (entries.size() != static_cast<std::size_t>(params_.t)) {
    throw std::invalid_argument("interaction must have exactly t=" + std::to_string(params_.t) +
                                " entries, got " + std::to_string(entries.size()));
  }
  std::uint64_t colex = 0;
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (e.column < 0 || e.column >= params_.k) {
      throw std::invalid_argument("interaction column out of range: " + to_string(interaction));
    }
    if (i > 0 && entries[i - 1].column >= e.column) {
      throw std::invalid_argument("interaction columns must be strictly increasing: " +
                                  to_string(interaction));
    }
    if (e.value >= params_.v) {
      throw std::invalid_argument("interaction value out of range: " + to_string(interaction));
    }
    colex += binomial(e.column, static_cast<int>(i + 1));
    code += e.value * value_weight_[i];
  }
  return colex * tuples_per_set_ + code;
}

Interaction InteractionSpace::unrank(Rank rank) const {
  if (rank >= size_) {
    throw std::out_of_range("interaction rank " + std::to_string(rank) + " out of range [0, " +
                            std::to_string(size_) + ")");
  }
  Interaction result;
  const auto cols = columns_of(rank);
  result.entries.reserve(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    result.entries.push_back({cols[i], value_at(rank, static_cast<int>(i))});
  }
  return result;
}

CoverageState::CoverageState(const CAParams& params)
    : space_(std::make_shared<const InteractionSpace>(params)),
      counts_(space_->size(), 0),
      col_freq_(static_cast<std::size_t>(params.k) * static_cast<std::size_t>(params.v), 0) {}

CoverageState::CoverageState(const CAParams& params, const Array& rows) : CoverageState(params) {
  rows_.reserve(rows.size());
  for (const Row& row : rows) {
    append_row(row);
  }
}

Symbol CoverageState::least_frequent_symbol(int column) const {
  const std::size_t v = levels();
  const auto* freq = col_freq_.data() + static_cast<std::size_t>(column) * v;
  return static_cast<Symbol>(std::min_element(freq, freq + v) - freq);
}

std::uint32_t CoverageState::min_coverage() const {
  if (counts_.empty()) {
    return 0;
  }
  return *std::min_element(counts_.begin(), counts_.end());
}

void CoverageState::append_row(Row row) {
  if (row.size() != static_cast<std::size_t>(space_->factors())) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " symbols, expected k=" +
                                std::to_string(space_->factors()));
  }
  const std::size_t v = levels();
  for (const Symbol s : row) {
    if (s >= v) {
      throw std::invalid_argument("row symbol " + std::to_string(s) + " out of range for v=" +
                                  std::to_string(v));
    }
  }
  space_->for_each_covered(row, [this](Rank r) { ++counts_[r]; });
  for (std::size_t c = 0; c < row.size(); ++c) {
    ++col_freq_[c * v + row[c]];
  }
  rows_.push_back(std::move(row));
}

}  // namespace msca
