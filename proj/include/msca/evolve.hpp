#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "msca/multistage.hpp"

namespace msca {

using Rng = std::mt19937_64;

struct Fitness {
  std::size_t rows = 0;
  double cost = 0.0;

  bool operator==(const Fitness&) const = default;
};

/// True iff a is no worse than b in both objectives and better in one.
bool dominates(const Fitness& a, const Fitness& b);

struct Individual {
  StageSelection selection;
  std::optional<Fitness> fitness;
};

/// Uniform stage count in [1, min(lambda, max_stages)], uniform composition
/// of lambda into that many parts, uniform algorithm per stage.
/// max_stages <= 0 means lambda.
Individual random_individual(int lambda, Rng& rng, int max_stages = 0);

// Mutation operators. Each returns a valid selection with the same index sum
// and an unevaluated fitness; inapplicable cases return the input unchanged.
Individual mutate_append(const Individual& ind, Rng& rng);
Individual mutate_swap(const Individual& ind, Rng& rng);
Individual mutate_index_transfer(const Individual& ind, Rng& rng);
Individual mutate_modify(const Individual& ind, Rng& rng);
Individual mutate_join(const Individual& ind, Rng& rng);

enum class MutationKind { append, swap, index_transfer, modify, join };
inline constexpr std::size_t kMutationKinds = 5;

Individual apply_mutation(MutationKind kind, const Individual& ind, Rng& rng);
/// Applies one of the five operators chosen uniformly at random.
Individual mutate(const Individual& ind, Rng& rng, MutationKind* applied = nullptr);

/// Picks a in [1, |p1|], b in [1, |p2|] with a + b <= lambda, draws random
/// stage subsets of those sizes, shuffles them together and repairs the
/// index sum one unit at a time. For lambda = 1 (no such a, b) returns a
/// clone of a random parent.
Individual crossover(const Individual& p1, const Individual& p2, int lambda, Rng& rng);

/// Executes the selection; fitness cost is wall seconds or work units.
Individual evaluate(const Individual& ind, const CAParams& params, PrefixCache* cache,
                    CostMode mode);

/// Fast non-dominated sort over fitness values: fronts of indices, each
/// front ordered by crowding distance descending (ties by index).
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Fitness> points);

/// Crowding distance of every member of one front (boundary points get
/// +infinity). Result is aligned with `front`.
std::vector<double> crowding_distance(std::span<const Fitness> points,
                                      std::span<const std::size_t> front);

struct GAConfig {
  std::size_t population_size = 300;
  std::size_t generations = 100;
  std::uint64_t seed = 1;
  double crossover_probability = 0.9;
  double mutation_probability = 0.3;
  CostMode time_mode = CostMode::work;
  int max_stages = 0;  // <= 0: lambda
  unsigned jobs = 1;
  std::size_t cache_capacity = 4096;

  void validate() const;
};

struct FrontPoint {
  Fitness fitness;
  StageSelection selection;
};

struct ParetoFront {
  std::size_t generation = 0;
  /// Distinct non-dominated points sorted by (rows, cost).
  std::vector<FrontPoint> points;
};

struct GenerationBest {
  std::size_t generation = 0;
  FrontPoint lowest_rows;
  FrontPoint lowest_cost;
};

struct GAResult {
  /// One front per generation, generation 1 = the initial population.
  std::vector<ParetoFront> fronts;
  /// Generations 1, 10, 50, 100 and the last one, where reached.
  std::vector<GenerationBest> best;
  std::size_t evaluations = 0;
};

GAResult run_ga(const CAParams& params, const GAConfig& config);

/// "generation,n,t,selection" rows for every front.
std::string format_front_csv(std::span<const ParetoFront> fronts, CostMode mode);

}  // namespace msca
