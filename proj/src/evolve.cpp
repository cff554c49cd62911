#include "msca/evolve.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "msca/parallel.hpp"

namespace msca {
namespace {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double probability) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < probability;
}

Algorithm random_algorithm(Rng& rng) {
  return kAllAlgorithms[uniform_index(rng, 0, std::size(kAllAlgorithms) - 1)];
}

/// Index j != i, uniform over the other m - 1 positions.
std::size_t other_index(Rng& rng, std::size_t i, std::size_t m) {
  const std::size_t j = uniform_index(rng, 0, m - 2);
  return j >= i ? j + 1 : j;
}

Individual fresh(StageSelection selection) { return Individual{std::move(selection), std::nullopt}; }

}  // namespace

bool dominates(const Fitness& a, const Fitness& b) {
  return a.rows <= b.rows && a.cost <= b.cost && (a.rows < b.rows || a.cost < b.cost);
}

Individual random_individual(int lambda, Rng& rng, int max_stages) {
  if (lambda < 1) {
    throw std::invalid_argument("lambda must be >= 1");
  }
  const int cap = max_stages <= 0 ? lambda : std::min(lambda, max_stages);
  const std::size_t m = uniform_index(rng, 1, static_cast<std::size_t>(cap));

  // A uniform (m-1)-subset of the lambda-1 cut points gives a uniform composition.
  std::vector<std::uint32_t> cuts(static_cast<std::size_t>(lambda - 1));
  std::iota(cuts.begin(), cuts.end(), 1u);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(m - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(static_cast<std::uint32_t>(lambda));

  StageSelection selection;
  std::uint32_t previous = 0;
  for (const std::uint32_t cut : cuts) {
    selection.stages.push_back({random_algorithm(rng), cut - previous});
    previous = cut;
  }
  return fresh(std::move(selection));
}

Individual mutate_append(const Individual& ind, Rng& rng) {
  StageSelection s = ind.selection;
  const Algorithm added = random_algorithm(rng);
  std::vector<std::size_t> donors;
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    if (s.stages[i].index > 1) {
      donors.push_back(i);
    }
  }
  if (donors.empty()) {
    s.stages.erase(s.stages.begin() +
                   static_cast<std::ptrdiff_t>(uniform_index(rng, 0, s.stages.size() - 1)));
    s.stages.push_back({added, 1});
    return fresh(std::move(s));
  }
  Stage& donor = s.stages[donors[uniform_index(rng, 0, donors.size() - 1)]];
  const auto delta = static_cast<std::uint32_t>(uniform_index(rng, 1, donor.index - 1));
  donor.index -= delta;
  s.stages.push_back({added, delta});
  return fresh(std::move(s));
}

Individual mutate_swap(const Individual& ind, Rng& rng) {
  StageSelection s = ind.selection;
  const std::size_t m = s.stages.size();
  if (m < 2) {
    return fresh(std::move(s));
  }
  const std::size_t i = uniform_index(rng, 0, m - 1);
  const std::size_t j = other_index(rng, i, m);
  std::swap(s.stages[i], s.stages[j]);
  return fresh(std::move(s));
}

Individual mutate_index_transfer(const Individual& ind, Rng& rng) {
  StageSelection s = ind.selection;
  const std::size_t m = s.stages.size();
  std::vector<std::size_t> donors;
  for (std::size_t i = 0; i < m; ++i) {
    if (s.stages[i].index > 1) {
      donors.push_back(i);
    }
  }
  if (m < 2 || donors.empty()) {
    return fresh(std::move(s));
  }
  const std::size_t i = donors[uniform_index(rng, 0, donors.size() - 1)];
  const std::size_t j = other_index(rng, i, m);
  const auto delta = static_cast<std::uint32_t>(uniform_index(rng, 1, s.stages[i].index - 1));
  s.stages[i].index -= delta;
  s.stages[j].index += delta;
  return fresh(std::move(s));
}

Individual mutate_modify(const Individual& ind, Rng& rng) {
  StageSelection s = ind.selection;
  Stage& target = s.stages[uniform_index(rng, 0, s.stages.size() - 1)];
  std::vector<Algorithm> others;
  for (const Algorithm a : kAllAlgorithms) {
    if (a != target.algorithm) {
      others.push_back(a);
    }
  }
  target.algorithm = others[uniform_index(rng, 0, others.size() - 1)];
  return fresh(std::move(s));
}

Individual mutate_join(const Individual& ind, Rng& rng) {
  StageSelection s = ind.selection;
  const std::size_t m = s.stages.size();
  if (m < 2) {
    return fresh(std::move(s));
  }
  const std::size_t i = uniform_index(rng, 0, m - 1);
  const std::size_t j = other_index(rng, i, m);
  const Stage merged{coin(rng, 0.5) ? s.stages[i].algorithm : s.stages[j].algorithm,
                     s.stages[i].index + s.stages[j].index};
  const std::size_t lo = std::min(i, j);
  const std::size_t hi = std::max(i, j);
  s.stages.erase(s.stages.begin() + static_cast<std::ptrdiff_t>(hi));
  s.stages[lo] = merged;
  return fresh(std::move(s));
}

Individual apply_mutation(MutationKind kind, const Individual& ind, Rng& rng) {
  switch (kind) {
    case MutationKind::append:
      return mutate_append(ind, rng);
    case MutationKind::swap:
      return mutate_swap(ind, rng);
    case MutationKind::index_transfer:
      return mutate_index_transfer(ind, rng);
    case MutationKind::modify:
      return mutate_modify(ind, rng);
    case MutationKind::join:
      return mutate_join(ind, rng);
  }
  throw std::invalid_argument("unknown mutation kind");
}

Individual mutate(const Individual& ind, Rng& rng, MutationKind* applied) {
  const auto kind = static_cast<MutationKind>(uniform_index(rng, 0, kMutationKinds - 1));
  if (applied != nullptr) {
    *applied = kind;
  }
  return apply_mutation(kind, ind, rng);
}

Individual crossover(const Individual& p1, const Individual& p2, int lambda, Rng& rng) {
  if (lambda < 2) {
    return fresh(coin(rng, 0.5) ? p1.selection : p2.selection);
  }
  const auto total = static_cast<std::size_t>(lambda);
  const std::size_t m = p1.selection.size();
  const std::size_t n = p2.selection.size();
  const std::size_t a = uniform_index(rng, 1, std::min(m, total - 1));
  const std::size_t b = uniform_index(rng, 1, std::min(n, total - a));

  const auto pick = [&rng](const StageSelection& parent, std::size_t count) {
    std::vector<std::size_t> positions(parent.size());
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    std::vector<Stage> chosen;
    for (std::size_t i = 0; i < count; ++i) {
      chosen.push_back(parent.stages[positions[i]]);
    }
    return chosen;
  };

  StageSelection child;
  child.stages = pick(p1.selection, a);
  const auto from_second = pick(p2.selection, b);
  child.stages.insert(child.stages.end(), from_second.begin(), from_second.end());
  std::shuffle(child.stages.begin(), child.stages.end(), rng);

  auto sum = static_cast<std::size_t>(child.total_index());
  while (sum > total) {
    std::vector<std::size_t> reducible;
    for (std::size_t i = 0; i < child.stages.size(); ++i) {
      if (child.stages[i].index > 1) {
        reducible.push_back(i);
      }
    }
    --child.stages[reducible[uniform_index(rng, 0, reducible.size() - 1)]].index;
    --sum;
  }
  while (sum < total) {
    ++child.stages[uniform_index(rng, 0, child.stages.size() - 1)].index;
    ++sum;
  }
  return fresh(std::move(child));
}

Individual evaluate(const Individual& ind, const CAParams& params, PrefixCache* cache,
                    CostMode mode) {
  const ExecutionRecord record = execute(ind.selection, params, cache);
  Individual out = ind;
  out.fitness = Fitness{record.rows(), record.cost.value(mode)};
  return out;
}

std::vector<double> crowding_distance(std::span<const Fitness> points,
                                      std::span<const std::size_t> front) {
  const std::size_t size = front.size();
  std::vector<double> distance(size, 0.0);
  if (size <= 2) {
    std::fill(distance.begin(), distance.end(), std::numeric_limits<double>::infinity());
    return distance;
  }
  const auto objective = [&](std::size_t member, int which) {
    const Fitness& f = points[front[member]];
    return which == 0 ? static_cast<double>(f.rows) : f.cost;
  };
  std::vector<std::size_t> order(size);
  for (int which = 0; which < 2; ++which) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return objective(x, which) < objective(y, which);
    });
    const double lo = objective(order.front(), which);
    const double hi = objective(order.back(), which);
    distance[order.front()] = std::numeric_limits<double>::infinity();
    distance[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) {
      continue;
    }
    for (std::size_t r = 1; r + 1 < size; ++r) {
      distance[order[r]] += (objective(order[r + 1], which) - objective(order[r - 1], which)) / (hi - lo);
    }
  }
  return distance;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Fitness> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by_me[p].push_back(q);
      } else if (dominates(points[q], points[p])) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) {
      current.push_back(p);
    }
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (const std::size_t p : current) {
      for (const std::size_t q : dominated_by_me[p]) {
        if (--domination_count[q] == 0) {
          next.push_back(q);
        }
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }

  for (auto& front : fronts) {
    const auto distance = crowding_distance(points, front);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return distance[x] > distance[y]; });
    std::vector<std::size_t> sorted;
    sorted.reserve(front.size());
    for (const std::size_t i : order) {
      sorted.push_back(front[i]);
    }
    front = std::move(sorted);
  }
  return fronts;
}

void GAConfig::validate() const {
  if (population_size < 2) {
    throw std::invalid_argument("population size must be >= 2");
  }
  if (generations < 1) {
    throw std::invalid_argument("generation count must be >= 1");
  }
  if (crossover_probability < 0.0 || crossover_probability > 1.0 || mutation_probability < 0.0 ||
      mutation_probability > 1.0) {
    throw std::invalid_argument("operator probabilities must lie in [0, 1]");
  }
}

namespace {

std::vector<Fitness> fitness_of(const std::vector<Individual>& population) {
  std::vector<Fitness> points;
  points.reserve(population.size());
  for (const Individual& ind : population) {
    points.push_back(*ind.fitness);
  }
  return points;
}

void evaluate_all(std::vector<Individual>& population, const CAParams& params, PrefixCache& cache,
                  const GAConfig& config) {
  const unsigned jobs = config.time_mode == CostMode::wall ? 1u : config.jobs;
  parallel_for(population.size(), jobs, [&](std::size_t i) {
    if (!population[i].fitness) {
      population[i] = evaluate(population[i], params, &cache, config.time_mode);
    }
  });
}

ParetoFront first_front(const std::vector<Individual>& population, std::size_t generation) {
  const auto points = fitness_of(population);
  const auto fronts = nondominated_sort(points);
  std::map<std::string, FrontPoint> unique;
  for (const std::size_t i : fronts.front()) {
    unique.emplace(population[i].selection.to_string(),
                   FrontPoint{points[i], population[i].selection});
  }
  ParetoFront front;
  front.generation = generation;
  for (auto& [key, point] : unique) {
    front.points.push_back(std::move(point));
  }
  std::stable_sort(front.points.begin(), front.points.end(),
                   [](const FrontPoint& a, const FrontPoint& b) {
                     if (a.fitness.rows != b.fitness.rows) {
                       return a.fitness.rows < b.fitness.rows;
                     }
                     return a.fitness.cost < b.fitness.cost;
                   });
  return front;
}

GenerationBest best_of(const std::vector<Individual>& population, std::size_t generation) {
  GenerationBest best;
  best.generation = generation;
  const Individual* lowest_rows = &population.front();
  const Individual* lowest_cost = &population.front();
  for (const Individual& ind : population) {
    const Fitness& f = *ind.fitness;
    const Fitness& r = *lowest_rows->fitness;
    const Fitness& c = *lowest_cost->fitness;
    if (f.rows < r.rows || (f.rows == r.rows && f.cost < r.cost)) {
      lowest_rows = &ind;
    }
    if (f.cost < c.cost || (f.cost == c.cost && f.rows < c.rows)) {
      lowest_cost = &ind;
    }
  }
  best.lowest_rows = {*lowest_rows->fitness, lowest_rows->selection};
  best.lowest_cost = {*lowest_cost->fitness, lowest_cost->selection};
  return best;
}

bool recorded_generation(std::size_t generation, std::size_t last) {
  return generation == 1 || generation == 10 || generation == 50 || generation == 100 ||
         generation == last;
}

}  // namespace

GAResult run_ga(const CAParams& params, const GAConfig& config) {
  params.validate();
  config.validate();
  Rng rng(config.seed);
  PrefixCache cache(config.cache_capacity);
  GAResult result;

  std::vector<Individual> population;
  population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    population.push_back(random_individual(params.lambda, rng, config.max_stages));
  }
  evaluate_all(population, params, cache, config);
  result.evaluations += population.size();

  const auto record = [&](std::size_t generation) {
    result.fronts.push_back(first_front(population, generation));
    if (recorded_generation(generation, config.generations)) {
      result.best.push_back(best_of(population, generation));
    }
  };
  record(1);

  for (std::size_t generation = 2; generation <= config.generations; ++generation) {
    // Rank and crowding of the current parents for binary tournaments.
    const auto points = fitness_of(population);
    const auto fronts = nondominated_sort(points);
    std::vector<std::size_t> rank(population.size());
    std::vector<double> crowding(population.size());
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      const auto distance = crowding_distance(points, fronts[f]);
      for (std::size_t i = 0; i < fronts[f].size(); ++i) {
        rank[fronts[f][i]] = f;
        crowding[fronts[f][i]] = distance[i];
      }
    }
    const auto tournament = [&]() -> const Individual& {
      const std::size_t a = uniform_index(rng, 0, population.size() - 1);
      const std::size_t b = uniform_index(rng, 0, population.size() - 1);
      if (rank[a] != rank[b]) {
        return population[rank[a] < rank[b] ? a : b];
      }
      return population[crowding[b] > crowding[a] ? b : a];
    };

    std::vector<Individual> offspring;
    offspring.reserve(config.population_size);
    while (offspring.size() < config.population_size) {
      const Individual& first = tournament();
      Individual child;
      if (coin(rng, config.crossover_probability)) {
        const Individual& second = tournament();
        child = crossover(first, second, params.lambda, rng);
      } else {
        child = first;
      }
      if (coin(rng, config.mutation_probability)) {
        child = mutate(child, rng);
      }
      offspring.push_back(std::move(child));
    }
    evaluate_all(offspring, params, cache, config);
    result.evaluations += offspring.size();

    // (mu + lambda) survival: whole fronts first, then the most isolated
    // members of the front that overflows.
    std::vector<Individual> merged = std::move(population);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    const auto merged_points = fitness_of(merged);
    const auto merged_fronts = nondominated_sort(merged_points);
    population.clear();
    for (const auto& front : merged_fronts) {
      for (const std::size_t i : front) {
        if (population.size() == config.population_size) {
          break;
        }
        population.push_back(merged[i]);
      }
      if (population.size() == config.population_size) {
        break;
      }
    }
    record(generation);
  }
  return result;
}

std::string format_front_csv(std::span<const ParetoFront> fronts, CostMode mode) {
  std::ostringstream os;
  os << "generation,n,t,selection\n";
  if (mode == CostMode::wall) {
    os.precision(6);
    os << std::fixed;
  } else {
    os.precision(0);
    os << std::fixed;
  }
  for (const ParetoFront& front : fronts) {
    for (const FrontPoint& p : front.points) {
      os << front.generation << ',' << p.fitness.rows << ',' << p.fitness.cost << ",\""
         << p.selection.to_string() << "\"\n";
    }
  }
  return os.str();
}

}  // namespace msca
