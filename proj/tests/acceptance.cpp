// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "msca/basic.hpp"
#include "msca/coloring.hpp"
#include "msca/evolve.hpp"
#include "msca/multistage.hpp"
#include "msca/verify.hpp"
#include "oracle.hpp"

using namespace msca;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

StageSelection sel(const char* text) { return StageSelection::parse(text); }

Outcome fixtures() {
  const auto start = Clock::now();
  const auto small = load_fixture("ca1_9x4.txt");
  const auto left = load_fixture("ca5_27x18.txt");
  const auto right = load_fixture("ca5_29x18.txt");
  const bool a = small.params == CAParams{2, 4, 3, 1} && small.rows.size() == 9 &&
                 is_covering_array(small.rows, small.params).covering;
  const bool b = left.params == CAParams{2, 18, 2, 5} && left.rows.size() == 27 &&
                 is_covering_array(left.rows, left.params).covering;
  const bool c = right.params == CAParams{2, 18, 2, 5} && right.rows.size() == 29 &&
                 is_covering_array(right.rows, right.params).covering;
  const double t = seconds_since(start);
  std::ostringstream os;
  os << "CA1(9;2,4,3) " << a << ", CA5(27;2,18,2) " << b << ", CA5(29;2,18,2) " << c << ", "
     << t << " s";
  return {a && b && c && t < 1.0, os.str()};
}

Outcome basic_identities() {
  const auto start = Clock::now();
  const CAParams rows[] = {{2, 10, 2, 5}, {2, 10, 2, 10}, {2, 10, 3, 5}, {2, 20, 2, 5},
                           {2, 20, 2, 10}, {3, 10, 2, 5}, {4, 10, 2, 5}};
  const std::uint64_t expected[] = {900, 1800, 2025, 3800, 7600, 4800, 16800};
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < 7; ++i) {
    const CAParams& p = rows[i];
    const auto record = execute({{{Algorithm::basic, static_cast<std::uint32_t>(p.lambda)}}}, p, nullptr);
    const bool exact = record.rows() == expected[i] && record.rows() == interaction_count(p) * p.lambda;
    ok = ok && exact;
    os << record.rows() << (exact ? "" : "!") << ' ';
  }
  const double t = seconds_since(start);
  os << t << " s";
  return {ok && t < 30.0, os.str()};
}

Outcome density_baseline() {
  const auto a = execute(sel("D:5"), {2, 18, 2, 5}, nullptr);
  const auto b = execute(sel("D:5"), {2, 10, 2, 5}, nullptr);
  const auto near = [](std::size_t n, long target, long tol) {
    return std::labs(static_cast<long>(n) - target) <= tol;
  };
  std::ostringstream os;
  os << "k=18: " << a.rows() << " (29 +- 3), k=10: " << b.rows() << " (26 +- 2)";
  return {near(a.rows(), 29, 3) && near(b.rows(), 26, 2), os.str()};
}

struct SweepRun {
  std::vector<SweepEntry> cached;
  std::vector<SweepEntry> plain;
  double cached_seconds = 0.0;
};

SweepRun& sweep() {
  static SweepRun run = [] {
    SweepRun r;
    const CAParams p{2, 18, 2, 5};
    const auto selections = enumerate_selections(5, 5, kAllAlgorithms);
    PrefixCache cache;
    const auto start = Clock::now();
    r.cached = run_sweep(p, selections, &cache, 1);
    r.cached_seconds = seconds_since(start);
    r.plain = run_sweep(p, selections, nullptr, 1);
    return r;
  }();
  return run;
}

Outcome multistage_beats_single() {
  const auto& run = sweep();
  const auto stats = sweep_stats(run.cached, CostMode::work);
  bool valid = run.cached.size() == 2500 && stats.size() == 5;
  double best_multi = 1e18;
  bool monotone = true;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i].stage_count >= 2) {
      best_multi = std::min(best_multi, stats[i].rows.min);
    }
    if (i > 0 && stats[i].rows.max > stats[i - 1].rows.max) {
      monotone = false;
    }
  }
  const double single = stats.empty() ? 0.0 : stats.front().rows.min;
  std::ostringstream os;
  os << "min N at NS=1 " << single << ", min N at NS>=2 " << best_multi << ", max N by NS";
  for (const auto& s : stats) {
    os << ' ' << s.rows.max;
  }
  os << ", " << run.cached_seconds << " s cached";
  return {valid && best_multi < single && best_multi <= 29 && monotone, os.str()};
}

Outcome cache_speedup() {
  const auto& run = sweep();
  std::size_t fresh_cached = 0;
  std::size_t fresh_plain = 0;
  bool identical = run.cached.size() == run.plain.size();
  for (std::size_t i = 0; identical && i < run.cached.size(); ++i) {
    fresh_cached += run.cached[i].fresh_stages;
    fresh_plain += run.plain[i].fresh_stages;
    identical = run.cached[i].digest == run.plain[i].digest && run.cached[i].rows == run.plain[i].rows;
  }
  std::ostringstream os;
  os << "fresh stages " << fresh_cached << " cached vs " << fresh_plain << " uncached, arrays "
     << (identical ? "identical" : "DIFFER");
  return {identical && 2 * fresh_cached <= fresh_plain, os.str()};
}

Outcome ga_desk_scale() {
  const auto start = Clock::now();
  const CAParams p{2, 10, 2, 5};
  const auto baseline = execute(sel("D:5"), p, nullptr);
  GAConfig config;
  config.population_size = 50;
  config.generations = 30;
  config.seed = 1;
  config.time_mode = CostMode::work;
  const GAResult result = run_ga(p, config);
  const GenerationBest& last = result.best.back();
  const double t = seconds_since(start);
  const double ratio = last.lowest_cost.fitness.cost / static_cast<double>(baseline.cost.work);
  std::ostringstream os;
  os << "best N " << last.lowest_rows.fitness.rows << " (" << last.lowest_rows.selection.to_string()
     << "), lowest-T cost " << last.lowest_cost.fitness.cost << " = " << ratio * 100.0
     << "% of D:5 (" << baseline.cost.work << "), generation " << last.generation << ", " << t
     << " s";
  return {last.generation == 30 && last.lowest_rows.fitness.rows <= 26 && ratio <= 0.25 && t <= 300.0,
          os.str()};
}

Outcome profile_anchors() {
  const auto left = load_fixture("ca5_27x18.txt");
  const auto profile = coverage_profile(left.rows, left.params, 5);
  const auto row = first_covered_row(left.rows, Interaction{{{0, 0}, {1, 0}}}, 5);
  std::ostringstream os;
  os << "{(0,0),(1,0)} first 5-covered at row " << (row ? std::to_string(*row) : "never")
     << ", cumulative " << profile.back().cumulative << " at row " << profile.back().row;
  return {row == 12u && profile.back().cumulative == 612 && profile.back().row == 26, os.str()};
}

Outcome property_suites() {
  std::mt19937_64 rng(8);
  std::ostringstream os;

  bool oracle_ok = true;
  for (int trial = 0; trial < 100 && oracle_ok; ++trial) {
    const CAParams p{1 + trial % 3, 8, 2 + trial % 2, 1};
    const Array a = oracle::random_array(rng, 20, p.k, p.v);
    const CoverageState s(p, a);
    const auto want = oracle::counts(a, p);
    oracle_ok = want == std::vector<std::uint32_t>(s.counts().begin(), s.counts().end()) &&
                want == brute_force_counts(a, p);
  }
  os << "oracle " << oracle_ok;

  bool closure_ok = true;
  Rng grng(9);
  for (int i = 0; i < 100000 && closure_ok; ++i) {
    const int lambda = 1 + i % 6;
    const auto a = random_individual(lambda, grng);
    const Individual out = i % 6 == 5
                               ? crossover(a, random_individual(lambda, grng), lambda, grng)
                               : apply_mutation(static_cast<MutationKind>(i % 6), a, grng);
    closure_ok = !out.selection.stages.empty() &&
                 out.selection.total_index() == static_cast<std::uint32_t>(lambda);
    for (const Stage& s : out.selection.stages) {
      closure_ok = closure_ok && s.index >= 1;
    }
  }
  os << ", closure " << closure_ok;

  bool coloring_ok = true;
  for (int trial = 0; trial < 30 && coloring_ok; ++trial) {
    const CAParams p{1 + trial % 3, 3 + trial % 4, 2 + trial % 2, 3};
    CoverageState s(p, oracle::random_array(rng, static_cast<std::size_t>(trial % 5), p.k, p.v));
    const std::uint32_t alpha = s.min_coverage();
    const StageGoal goal{alpha, alpha + 1 + static_cast<std::uint32_t>(trial % 2)};
    const auto g = build_incompatibility_graph(s, goal);
    const auto order = trial % 2 == 0 ? order_largest_first(g) : order_smallest_last(g);
    const auto colors = greedy_color(g, order);
    for (std::size_t a = 0; a < g.vertex_count() && coloring_ok; ++a) {
      g.for_each_neighbor(a, [&](std::size_t b) { coloring_ok = coloring_ok && colors[a] != colors[b]; });
    }
    rows_from_coloring(s, g, colors);
    coloring_ok = coloring_ok && oracle::min_coverage(s.rows(), p) >= goal.beta;
  }
  os << ", coloring " << coloring_ok;

  bool nsga_ok = true;
  {
    std::uniform_int_distribution<int> coord(0, 50);
    std::vector<Fitness> pts;
    std::vector<oracle::Point> ref;
    for (int i = 0; i < 200; ++i) {
      const int a = coord(rng);
      const int b = coord(rng);
      pts.push_back({static_cast<std::size_t>(a), static_cast<double>(b)});
      ref.push_back({static_cast<double>(a), static_cast<double>(b)});
    }
    const auto want = oracle::front_ranks(ref);
    const auto fronts = nondominated_sort(pts);
    std::vector<std::size_t> got(pts.size(), static_cast<std::size_t>(-1));
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      for (const std::size_t i : fronts[f]) {
        got[i] = f;
      }
    }
    nsga_ok = got == want;
  }
  os << ", nsga " << nsga_ok;

  bool deterministic = true;
  for (const Algorithm alg : kAllAlgorithms) {
    const CAParams p{2, 9, 3, 2};
    const StageSelection s{{{alg, 2}}};
    deterministic = deterministic && execute(s, p, nullptr).array == execute(s, p, nullptr).array;
  }
  {
    const CAParams p{2, 8, 2, 4};
    const StageSelection s = sel("D:1,S:1,L:1,B:1");
    deterministic = deterministic && execute(s, p, nullptr).array == execute(s, p, nullptr).array;
    GAConfig c;
    c.population_size = 12;
    c.generations = 5;
    c.seed = 3;
    deterministic = deterministic && format_front_csv(run_ga(p, c).fronts, CostMode::work) ==
                                         format_front_csv(run_ga(p, c).fronts, CostMode::work);
  }
  os << ", determinism " << deterministic;
  return {oracle_ok && closure_ok && coloring_ok && nsga_ok && deterministic, os.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"fixture certification", fixtures},
      {"basic row-count identities", basic_identities},
      {"density baseline", density_baseline},
      {"multi-stage beats single-stage", multistage_beats_single},
      {"cache speedup", cache_speedup},
      {"GA desk-scale", ga_desk_scale},
      {"profile anchors", profile_anchors},
      {"property suites", property_suites},
  };
  int failures = 0;
  int number = 0;
  for (const auto& [name, check] : criteria) {
    ++number;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << number << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": "
              << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
