#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msca {

using Symbol = std::uint16_t;
using Row = std::vector<Symbol>;
using Array = std::vector<Row>;
using Rank = std::uint64_t;

/// Parameters of a uniform covering array CA_lambda(N; t, k, v).
struct CAParams {
  int t = 2;
  int k = 2;
  int v = 2;
  int lambda = 1;

  /// Throws std::invalid_argument unless 1 <= t <= k, v >= 2, lambda >= 1.
  void validate() const;

  bool operator==(const CAParams&) const = default;
};

std::string to_string(const CAParams& params);

/// Binomial coefficient C(n, r). Throws std::overflow_error if the value
/// does not fit in 64 bits.
std::uint64_t binomial(int n, int r);

/// C(k, t) * v^t, the number of t-way interactions. Throws
/// std::overflow_error on 64-bit overflow.
std::uint64_t interaction_count(const CAParams& params);

struct Entry {
  int column = 0;
  Symbol value = 0;

  bool operator==(const Entry&) const = default;
};

/// A t-way interaction: exactly t (column, value) pairs, columns ascending.
struct Interaction {
  std::vector<Entry> entries;

  bool operator==(const Interaction&) const = default;
};

std::string to_string(const Interaction& interaction);

/// True iff row[c] == value for every (c, value) in the interaction.
bool row_covers(std::span<const Symbol> row, const Interaction& interaction);

/// Canonical numbering of all t-way interactions for fixed (t, k, v).
///
/// Column sets are numbered in colexicographic order (combinatorial number
/// system); within a column set the value tuple is read as a base-v number
/// with the first (lowest) column as the least significant digit. The rank of
/// an interaction is colset_rank * v^t + value_code.
class InteractionSpace {
 public:
  explicit InteractionSpace(const CAParams& params);

  const CAParams& params() const { return params_; }
  int strength() const { return params_.t; }
  int factors() const { return params_.k; }
  int levels() const { return params_.v; }

  std::uint64_t size() const { return size_; }
  std::size_t column_set_count() const { return column_set_count_; }
  /// Number of value tuples per column set, v^t.
  std::uint64_t tuples_per_set() const { return tuples_per_set_; }

  std::span<const int> column_set(std::size_t index) const {
    return {column_sets_.data() + index * static_cast<std::size_t>(params_.t),
            static_cast<std::size_t>(params_.t)};
  }
  std::span<const int> columns_of(Rank rank) const {
    return column_set(static_cast<std::size_t>(rank / tuples_per_set_));
  }
  /// Value of the interaction at its pos-th column (0 <= pos < t).
  Symbol value_at(Rank rank, int pos) const {
    return static_cast<Symbol>((rank % tuples_per_set_) / value_weight_[pos] %
                               static_cast<std::uint64_t>(params_.v));
  }

  /// Throws std::invalid_argument on a malformed interaction.
  Rank rank(const Interaction& interaction) const;
  /// Throws std::out_of_range if rank >= size().
  Interaction unrank(Rank rank) const;

  /// Calls fn(rank) for each of the C(k, t) interactions contained in row.
  template <typename Fn>
  void for_each_covered(std::span<const Symbol> row, Fn&& fn) const {
    const auto t = static_cast<std::size_t>(params_.t);
    for (std::size_t set = 0; set < column_set_count_; ++set) {
      const int* cols = column_sets_.data() + set * t;
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < t; ++i) {
        code += row[cols[i]] * value_weight_[i];
      }
      fn(static_cast<Rank>(set) * tuples_per_set_ + code);
    }
  }

 private:
  CAParams params_;
  std::uint64_t size_ = 0;
  std::size_t column_set_count_ = 0;
  std::uint64_t tuples_per_set_ = 1;
  std::vector<std::uint64_t> value_weight_;
  std::vector<int> column_sets_;
};

/// Rows built so far together with per-interaction coverage counts and
/// per-column symbol frequencies. Append-only.
class CoverageState {
 public:
  explicit CoverageState(const CAParams& params);
  CoverageState(const CAParams& params, const Array& rows);

  const CAParams& params() const { return space_->params(); }
  const InteractionSpace& space() const { return *space_; }
  std::shared_ptr<const InteractionSpace> shared_space() const { return space_; }

  const Array& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  std::span<const std::uint32_t> counts() const { return counts_; }
  std::uint32_t count(Rank rank) const { return counts_[rank]; }

  std::uint32_t column_frequency(int column, Symbol symbol) const {
    return col_freq_[static_cast<std::size_t>(column) * levels() + symbol];
  }
  /// Least frequent symbol in the column so far; ties go to the smallest.
  Symbol least_frequent_symbol(int column) const;

  /// Minimum coverage count over every interaction (0 for an empty array).
  std::uint32_t min_coverage() const;

  /// Throws std::invalid_argument if the row has the wrong length or a
  /// symbol out of range.
  void append_row(Row row);

 private:
  std::size_t levels() const { return static_cast<std::size_t>(space_->levels()); }

  std::shared_ptr<const InteractionSpace> space_;
  Array rows_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> col_freq_;
};

}  // namespace msca
