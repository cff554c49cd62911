#include "msca/multistage.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "msca/basic.hpp"
#include "msca/coloring.hpp"
#include "msca/density.hpp"
#include "msca/parallel.hpp"

namespace msca {

char algorithm_code(Algorithm algorithm) { return static_cast<char>(algorithm); }

Algorithm parse_algorithm(char code) {
  switch (code) {
    case 'B':
      return Algorithm::basic;
    case 'L':
      return Algorithm::largest_first;
    case 'S':
      return Algorithm::smallest_last;
    case 'D':
      return Algorithm::density;
    default:
      throw std::invalid_argument(std::string("unknown algorithm '") + code +
                                  "', expected one of B, L, S, D");
  }
}

StageResult run_stage(Algorithm algorithm, CoverageState& state, StageGoal goal) {
  switch (algorithm) {
    case Algorithm::basic:
      return run_basic(state, goal);
    case Algorithm::largest_first:
      return run_coloring(state, goal, VertexOrder::largest_first);
    case Algorithm::smallest_last:
      return run_coloring(state, goal, VertexOrder::smallest_last);
    case Algorithm::density:
      return run_density(state, goal);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::uint32_t StageSelection::total_index() const {
  std::uint32_t total = 0;
  for (const Stage& s : stages) {
    total += s.index;
  }
  return total;
}

void StageSelection::validate(int lambda) const {
  if (stages.empty()) {
    throw std::invalid_argument("stage selection is empty");
  }
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].index == 0) {
      throw std::invalid_argument("stage " + std::to_string(i + 1) + " (" +
                                  algorithm_code(stages[i].algorithm) + ":0) has index 0");
    }
  }
  if (total_index() != static_cast<std::uint32_t>(lambda)) {
    throw std::invalid_argument("stage indexes sum to " + std::to_string(total_index()) +
                                ", expected lambda=" + std::to_string(lambda));
  }
}

std::string StageSelection::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += algorithm_code(stages[i].algorithm);
    out += ':';
    out += std::to_string(stages[i].index);
  }
  return out;
}

StageSelection StageSelection::parse(std::string_view text) {
  StageSelection selection;
  if (text.empty()) {
    throw StageParseError("empty stage list");
  }
  std::size_t start = 0;
  std::size_t position = 1;
  while (true) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view token = text.substr(start, end - start);
    const std::string where = "stage " + std::to_string(position) + " '" + std::string(token) + "'";
    if (token.size() < 3 || token[1] != ':') {
      throw StageParseError(where + ": expected ALG:INDEX");
    }
    Stage stage;
    try {
      stage.algorithm = parse_algorithm(token[0]);
    } catch (const std::invalid_argument& e) {
      throw StageParseError(where + ": " + e.what());
    }
    const std::string_view digits = token.substr(2);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), stage.index);
    if (ec != std::errc() || ptr != digits.data() + digits.size() ||
        !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw StageParseError(where + ": index is not a positive integer");
    }
    if (stage.index == 0) {
      throw StageParseError(where + ": index must be positive");
    }
    selection.stages.push_back(stage);
    if (end == text.size()) {
      break;
    }
    start = end + 1;
    ++position;
  }
  return selection;
}

PrefixCache::PrefixCache(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

std::size_t PrefixCache::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

PrefixCache::Stats PrefixCache::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

std::optional<PrefixCache::Entry> PrefixCache::lookup(const std::string& key) {
  std::lock_guard lock(mutex_);
  ++stats_.lookups;
  const auto it = slots_.find(key);
  if (it == slots_.end()) {
    return std::nullopt;
  }
  ++stats_.hits;
  lru_.splice(lru_.begin(), lru_, it->second.position);
  return it->second.entry;
}

void PrefixCache::insert(const std::string& key, Entry entry) {
  std::lock_guard lock(mutex_);
  ++stats_.insertions;
  const auto it = slots_.find(key);
  if (it != slots_.end()) {
    it->second.entry = std::move(entry);
    lru_.splice(lru_.begin(), lru_, it->second.position);
    return;
  }
  lru_.push_front(key);
  slots_.emplace(key, Slot{std::move(entry), lru_.begin()});
  while (slots_.size() > capacity_) {
    slots_.erase(lru_.back());
    lru_.pop_back();
    ++stats_.evictions;
  }
}

std::string PrefixCache::key(const CAParams& params, std::span<const Stage> prefix) {
  std::string out = std::to_string(params.t) + ' ' + std::to_string(params.k) + ' ' +
                    std::to_string(params.v) + ' ' + std::to_string(params.lambda) + '|';
  for (const Stage& s : prefix) {
    out += algorithm_code(s.algorithm);
    out += std::to_string(s.index);
    out += ',';
  }
  return out;
}

ExecutionRecord execute(const StageSelection& selection, const CAParams& params,
                        PrefixCache* cache) {
  params.validate();
  selection.validate(params.lambda);
  const std::span<const Stage> stages(selection.stages);

  ExecutionRecord record;
  record.selection = selection;

  std::optional<PrefixCache::Entry> hit;
  if (cache != nullptr) {
    for (std::size_t len = stages.size(); len > 0 && !hit; --len) {
      hit = cache->lookup(PrefixCache::key(params, stages.first(len)));
      if (hit) {
        record.cache_hits = len;
      }
    }
  }

  CoverageState state = hit ? CoverageState(params, hit->array) : CoverageState(params);
  std::uint32_t alpha = 0;
  if (hit) {
    record.cost = hit->cost;
    record.per_stage = std::move(hit->per_stage);
    for (StageRecord& s : record.per_stage) {
      s.from_cache = true;
    }
    alpha = record.per_stage.back().cumulative_index;
  }

  for (std::size_t i = record.cache_hits; i < stages.size(); ++i) {
    const Stage& stage = stages[i];
    const StageGoal goal{alpha, alpha + stage.index};
    const auto start = std::chrono::steady_clock::now();
    const StageResult result = run_stage(stage.algorithm, state, goal);
    const auto stop = std::chrono::steady_clock::now();
    alpha = goal.beta;

    StageRecord stage_record;
    stage_record.stage = stage;
    stage_record.rows_added = result.rows_added;
    stage_record.cost.seconds = std::chrono::duration<double>(stop - start).count();
    stage_record.cost.work = result.work;
    stage_record.cumulative_index = alpha;
    record.cost += stage_record.cost;
    record.per_stage.push_back(stage_record);

    if (cache != nullptr) {
      cache->insert(PrefixCache::key(params, stages.first(i + 1)),
                    PrefixCache::Entry{state.rows(), record.cost, record.per_stage});
    }
  }

  if (state.min_coverage() < static_cast<std::uint32_t>(params.lambda)) {
    throw std::logic_error("selection " + selection.to_string() + " ended below index " +
                           std::to_string(params.lambda));
  }
  record.array = state.rows();
  return record;
}

namespace {

void compositions(std::uint32_t remaining, std::size_t parts, std::vector<std::uint32_t>& prefix,
                  std::vector<std::vector<std::uint32_t>>& out) {
  if (parts == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::uint32_t first = 1; first + (parts - 1) <= remaining; ++first) {
    prefix.push_back(first);
    compositions(remaining - first, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<StageSelection> enumerate_selections(int lambda, int max_stages,
                                                 std::span<const Algorithm> algorithms) {
  if (lambda < 1 || max_stages < 1) {
    throw std::invalid_argument("enumerate_selections needs lambda >= 1 and max_stages >= 1");
  }
  if (algorithms.empty()) {
    throw std::invalid_argument("enumerate_selections needs at least one algorithm");
  }
  std::vector<StageSelection> result;
  const auto top = static_cast<std::size_t>(std::min(max_stages, lambda));
  for (std::size_t m = 1; m <= top; ++m) {
    std::vector<std::vector<std::uint32_t>> splits;
    std::vector<std::uint32_t> prefix;
    compositions(static_cast<std::uint32_t>(lambda), m, prefix, splits);
    for (const auto& parts : splits) {
      // Odometer over algorithm tuples, last position fastest.
      std::vector<std::size_t> choice(m, 0);
      while (true) {
        StageSelection selection;
        for (std::size_t i = 0; i < m; ++i) {
          selection.stages.push_back({algorithms[choice[i]], parts[i]});
        }
        result.push_back(std::move(selection));
        std::size_t pos = m;
        while (pos > 0 && choice[pos - 1] + 1 == algorithms.size()) {
          choice[--pos] = 0;
        }
        if (pos == 0) {
          break;
        }
        ++choice[pos - 1];
      }
    }
  }
  return result;
}

std::uint64_t array_digest(const Array& array) {
  std::uint64_t hash = 1469598103934665603ULL;
  const auto mix = [&hash](std::uint64_t value) {
    hash ^= value;
    hash *= 1099511628211ULL;
  };
  mix(array.size());
  for (const Row& row : array) {
    mix(row.size());
    for (const Symbol s : row) {
      mix(s);
    }
  }
  return hash;
}

std::vector<SweepEntry> run_sweep(const CAParams& params, std::span<const StageSelection> selections,
                                  PrefixCache* cache, unsigned jobs) {
  std::vector<SweepEntry> entries(selections.size());
  parallel_for(selections.size(), jobs, [&](std::size_t i) {
    const ExecutionRecord record = execute(selections[i], params, cache);
    SweepEntry& entry = entries[i];
    entry.selection = selections[i];
    entry.rows = record.rows();
    entry.cost = record.cost;
    entry.fresh_stages = record.fresh_stages();
    entry.digest = array_digest(record.array);
  });
  return entries;
}

SummaryStats summarize(std::vector<double> values) {
  SummaryStats stats;
  if (values.empty()) {
    return stats;
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  stats.min = values.front();
  stats.max = values.back();
  double sum = 0.0;
  for (const double x : values) {
    sum += x;
  }
  stats.mean = sum / static_cast<double>(n);
  stats.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  double squares = 0.0;
  for (const double x : values) {
    squares += (x - stats.mean) * (x - stats.mean);
  }
  stats.stddev = std::sqrt(squares / static_cast<double>(n));
  return stats;
}

std::vector<StageCountStats> sweep_stats(std::span<const SweepEntry> entries, CostMode mode) {
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const SweepEntry& e : entries) {
    auto& [rows, cost] = groups[e.selection.size()];
    rows.push_back(static_cast<double>(e.rows));
    cost.push_back(e.cost.value(mode));
  }
  std::vector<StageCountStats> result;
  for (auto& [ns, group] : groups) {
    StageCountStats stats;
    stats.stage_count = ns;
    stats.selections = group.first.size();
    stats.rows = summarize(std::move(group.first));
    stats.cost = summarize(std::move(group.second));
    result.push_back(stats);
  }
  return result;
}

std::string format_sweep_csv(std::span<const StageCountStats> stats, CostMode mode) {
  std::ostringstream os;
  os << "ns,min_n,max_n,avg_n,median_n,stddev_n,min_t,max_t,avg_t,median_t,stddev_t\n";
  const auto whole = [](double x) { return static_cast<long long>(std::llround(x)); };
  os << std::fixed << std::setprecision(mode == CostMode::wall ? 6 : 1);
  for (const auto& s : stats) {
    os << s.stage_count << ',' << whole(s.rows.min) << ',' << whole(s.rows.max) << ','
       << whole(s.rows.mean) << ',' << whole(s.rows.median) << ',' << whole(s.rows.stddev) << ','
       << s.cost.min << ',' << s.cost.max << ',' << s.cost.mean << ',' << s.cost.median << ','
       << s.cost.stddev << '\n';
  }
  return os.str();
}

}  // namespace msca
