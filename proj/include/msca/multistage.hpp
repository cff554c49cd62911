#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "msca/core.hpp"
#include "msca/stage.hpp"

namespace msca {

enum class Algorithm : char {
  basic = 'B',
  largest_first = 'L',
  smallest_last = 'S',
  density = 'D',
};

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::basic, Algorithm::largest_first,
                                               Algorithm::smallest_last, Algorithm::density};

char algorithm_code(Algorithm algorithm);
/// Throws std::invalid_argument for anything but B, L, S, D.
Algorithm parse_algorithm(char code);

/// Runs one stage of the given family.
StageResult run_stage(Algorithm algorithm, CoverageState& state, StageGoal goal);

struct Stage {
  Algorithm algorithm = Algorithm::basic;
  std::uint32_t index = 1;

  bool operator==(const Stage&) const = default;
};

class StageParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered stages whose indexes sum to the target lambda.
struct StageSelection {
  std::vector<Stage> stages;

  std::uint32_t total_index() const;
  std::size_t size() const { return stages.size(); }

  /// Throws std::invalid_argument if empty, some index is 0, or the indexes
  /// do not sum to lambda.
  void validate(int lambda) const;

  /// "D:1,S:1,D:3".
  std::string to_string() const;
  /// Parses "ALG:INDEX,..." and throws StageParseError naming the offending
  /// stage on malformed input. Does not check the index sum.
  static StageSelection parse(std::string_view text);

  bool operator==(const StageSelection&) const = default;
};

enum class CostMode { wall, work };

struct Cost {
  double seconds = 0.0;
  std::uint64_t work = 0;

  double value(CostMode mode) const {
    return mode == CostMode::wall ? seconds : static_cast<double>(work);
  }
  Cost& operator+=(const Cost& other) {
    seconds += other.seconds;
    work += other.work;
    return *this;
  }
};

struct StageRecord {
  Stage stage;
  std::size_t rows_added = 0;
  Cost cost;
  std::uint32_t cumulative_index = 0;
  bool from_cache = false;
};

struct ExecutionRecord {
  StageSelection selection;
  Array array;
  Cost cost;
  std::vector<StageRecord> per_stage;
  /// Leading stages served from the prefix cache.
  std::size_t cache_hits = 0;

  std::size_t rows() const { return array.size(); }
  std::size_t fresh_stages() const { return per_stage.size() - cache_hits; }
};

/// Memo of deterministic stage prefixes keyed by (params, stage prefix).
///
/// Entries hold the array and the cost of building it the first time. The
/// cache is LRU-bounded and safe for concurrent use; two threads may compute
/// the same prefix, in which case the later insert wins.
class PrefixCache {
 public:
  struct Entry {
    Array array;
    Cost cost;
    std::vector<StageRecord> per_stage;
  };

  struct Stats {
    std::uint64_t lookups = 0;
    std::uint64_t hits = 0;
    std::uint64_t insertions = 0;
    std::uint64_t evictions = 0;
  };

  explicit PrefixCache(std::size_t capacity = 4096);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const;
  Stats stats() const;

  std::optional<Entry> lookup(const std::string& key);
  void insert(const std::string& key, Entry entry);

  static std::string key(const CAParams& params, std::span<const Stage> prefix);

 private:
  using LruList = std::list<std::string>;
  struct Slot {
    Entry entry;
    LruList::iterator position;
  };

  std::size_t capacity_;
  mutable std::mutex mutex_;
  LruList lru_;
  std::unordered_map<std::string, Slot> slots_;
  Stats stats_;
};

/// Runs every stage in order, reusing the longest cached prefix. The record's
/// cost is the cached prefix's original creation cost plus the fresh stages'
/// cost. `cache` may be null.
ExecutionRecord execute(const StageSelection& selection, const CAParams& params,
                        PrefixCache* cache);

/// Every (composition of lambda into m parts, algorithm tuple of length m)
/// for m = 1..min(max_stages, lambda). Ordered by m, then composition in
/// lexicographic order, then algorithm tuple.
std::vector<StageSelection> enumerate_selections(int lambda, int max_stages,
                                                 std::span<const Algorithm> algorithms);

struct SweepEntry {
  StageSelection selection;
  std::size_t rows = 0;
  Cost cost;
  std::size_t fresh_stages = 0;
  /// FNV-1a digest of the array text.
  std::uint64_t digest = 0;
};

struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  /// Population standard deviation.
  double stddev = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct StageCountStats {
  std::size_t stage_count = 0;
  std::size_t selections = 0;
  SummaryStats rows;
  SummaryStats cost;
};

/// Executes every selection (in parallel over `jobs` threads) against the
/// shared cache. Entries come back in the order of `selections`.
std::vector<SweepEntry> run_sweep(const CAParams& params, std::span<const StageSelection> selections,
                                  PrefixCache* cache, unsigned jobs = 1);

/// Per-stage-count statistics of N and cost, ascending by stage count.
std::vector<StageCountStats> sweep_stats(std::span<const SweepEntry> entries, CostMode mode);

/// "ns,min_n,max_n,avg_n,median_n,stddev_n,min_t,max_t,avg_t,median_t,stddev_t"
/// with avg/median/stddev of N rounded to the nearest integer.
std::string format_sweep_csv(std::span<const StageCountStats> stats, CostMode mode);

std::uint64_t array_digest(const Array& array);

}  // namespace msca
