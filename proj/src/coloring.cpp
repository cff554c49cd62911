#include "msca/coloring.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace msca {
namespace {

constexpr std::uint32_t kUncolored = std::numeric_limits<std::uint32_t>::max();

bool interactions_conflict(std::span<const int> cols_a, std::span<const Symbol> vals_a,
                           std::span<const int> cols_b, std::span<const Symbol> vals_b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < cols_a.size() && j < cols_b.size()) {
    if (cols_a[i] < cols_b[j]) {
      ++i;
    } else if (cols_b[j] < cols_a[i]) {
      ++j;
    } else {
      if (vals_a[i] != vals_b[j]) {
        return true;
      }
      ++i;
      ++j;
    }
  }
  return false;
}

}  // namespace

void IncompatibilityGraph::finalize(std::vector<std::vector<std::size_t>> group_adjacency) {
  const std::size_t groups = group_start_.size() - 1;
  group_of_.assign(vertices_.size(), 0);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t u = group_start_[g]; u < group_start_[g + 1]; ++u) {
      group_of_[u] = g;
    }
  }
  adj_start_.assign(1, 0);
  adj_.clear();
  group_degree_.assign(groups, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    auto& list = group_adjacency[g];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (const std::size_t h : list) {
      adj_.push_back(h);
      group_degree_[g] += group_start_[h + 1] - group_start_[h];
    }
    adj_start_.push_back(adj_.size());
  }
}

IncompatibilityGraph IncompatibilityGraph::from_edges(
    std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  IncompatibilityGraph graph;
  graph.vertices_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    graph.vertices_.push_back({static_cast<Rank>(i), 0});
    graph.group_start_.push_back(i + 1);
  }
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (a == b) {
      continue;
    }
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  graph.finalize(std::move(adjacency));
  return graph;
}

std::size_t IncompatibilityGraph::degree(std::size_t v) const {
  const std::size_t g = group_of_[v];
  return group_start_[g + 1] - group_start_[g] - 1 + group_degree_[g];
}

std::uint64_t IncompatibilityGraph::edge_count() const {
  std::uint64_t twice = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    twice += degree(v);
  }
  return twice / 2;
}

bool IncompatibilityGraph::adjacent(std::size_t a, std::size_t b) const {
  const std::size_t ga = group_of_[a];
  const std::size_t gb = group_of_[b];
  if (ga == gb) {
    return a != b;
  }
  const auto first = adj_.begin() + static_cast<std::ptrdiff_t>(adj_start_[ga]);
  const auto last = adj_.begin() + static_cast<std::ptrdiff_t>(adj_start_[ga + 1]);
  return std::binary_search(first, last, gb);
}

IncompatibilityGraph build_incompatibility_graph(const CoverageState& state, StageGoal goal) {
  goal.validate();
  const auto& space = state.space();
  const auto t = static_cast<std::size_t>(space.strength());
  IncompatibilityGraph graph;

  std::vector<Symbol> values;
  std::vector<Rank> ranks;
  const auto counts = state.counts();
  for (Rank r = 0; r < counts.size(); ++r) {
    if (counts[r] >= goal.beta) {
      continue;
    }
    if (counts[r] < goal.alpha) {
      throw std::invalid_argument("interaction " + to_string(space.unrank(r)) + " covered " +
                                  std::to_string(counts[r]) + " times, below stage entry index " +
                                  std::to_string(goal.alpha));
    }
    ranks.push_back(r);
    for (std::size_t i = 0; i < t; ++i) {
      values.push_back(space.value_at(r, static_cast<int>(i)));
    }
    for (std::uint32_t s = std::max(goal.alpha, counts[r]); s < goal.beta; ++s) {
      graph.vertices_.push_back({r, s});
    }
    graph.group_start_.push_back(graph.vertices_.size());
  }

  const std::size_t groups = ranks.size();
  std::vector<std::vector<std::size_t>> adjacency(groups);
  for (std::size_t a = 0; a < groups; ++a) {
    const auto cols_a = space.columns_of(ranks[a]);
    const std::span<const Symbol> vals_a(values.data() + a * t, t);
    for (std::size_t b = a + 1; b < groups; ++b) {
      const auto cols_b = space.columns_of(ranks[b]);
      const std::span<const Symbol> vals_b(values.data() + b * t, t);
      if (interactions_conflict(cols_a, vals_a, cols_b, vals_b)) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
      }
    }
  }
  graph.build_work_ = groups < 2 ? 0 : groups * (groups - 1) / 2;
  graph.finalize(std::move(adjacency));
  return graph;
}

std::vector<std::size_t> order_largest_first(const IncompatibilityGraph& graph) {
  std::vector<std::size_t> order(graph.vertex_count());
  std::vector<std::size_t> degree(graph.vertex_count());
  for (std::size_t v = 0; v < order.size(); ++v) {
    order[v] = v;
    degree[v] = graph.degree(v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  return order;
}

std::vector<std::size_t> order_smallest_last(const IncompatibilityGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> degree(n);
  using Item = std::pair<std::size_t, std::size_t>;  // (degree, vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = graph.degree(v);
    heap.push({degree[v], v});
  }
  std::vector<bool> removed(n, false);
  std::vector<std::size_t> order(n);
  std::size_t back = n;
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (removed[v] || d != degree[v]) {
      continue;
    }
    removed[v] = true;
    order[--back] = v;
    graph.for_each_neighbor(v, [&](std::size_t u) {
      if (!removed[u]) {
        heap.push({--degree[u], u});
      }
    });
  }
  return order;
}

std::vector<std::uint32_t> greedy_color(const IncompatibilityGraph& graph,
                                        std::span<const std::size_t> order) {
  const std::size_t n = graph.vertex_count();
  if (order.size() != n) {
    throw std::invalid_argument("ordering has " + std::to_string(order.size()) +
                                " entries for " + std::to_string(n) + " vertices");
  }
  std::vector<std::uint32_t> colors(n, kUncolored);
  std::vector<bool> seen(n, false);
  for (const std::size_t v : order) {
    if (v >= n || seen[v]) {
      throw std::invalid_argument("ordering is not a permutation of the vertices");
    }
    seen[v] = true;
  }

  // blocked[c] == stamp iff colour c is taken by a neighbour of the current vertex.
  std::vector<std::size_t> blocked;
  std::size_t stamp = 0;
  for (const std::size_t v : order) {
    ++stamp;
    graph.for_each_neighbor(v, [&](std::size_t u) {
      const std::uint32_t c = colors[u];
      if (c != kUncolored) {
        if (c >= blocked.size()) {
          blocked.resize(c + 1, 0);
        }
        blocked[c] = stamp;
      }
    });
    std::uint32_t c = 0;
    while (c < blocked.size() && blocked[c] == stamp) {
      ++c;
    }
    colors[v] = c;
  }
  return colors;
}

StageResult rows_from_coloring(CoverageState& state, const IncompatibilityGraph& graph,
                               std::span<const std::uint32_t> colors) {
  if (colors.size() != graph.vertex_count()) {
    throw std::invalid_argument("colouring size does not match the graph");
  }
  StageResult result;
  if (colors.empty()) {
    return result;
  }
  const std::uint32_t color_count = *std::max_element(colors.begin(), colors.end()) + 1;
  std::vector<std::vector<std::size_t>> classes(color_count);
  for (std::size_t v = 0; v < colors.size(); ++v) {
    classes[colors[v]].push_back(v);
  }

  const auto& space = state.space();
  const auto k = static_cast<std::size_t>(space.factors());
  for (std::uint32_t c = 0; c < color_count; ++c) {
    Row row(k, kUnset);
    for (const std::size_t v : classes[c]) {
      const Rank r = graph.vertex(v).rank;
      const auto cols = space.columns_of(r);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const Symbol value = space.value_at(r, static_cast<int>(i));
        Symbol& cell = row[cols[i]];
        if (cell != kUnset && cell != value) {
          throw std::logic_error("colour " + std::to_string(c) + " is not independent: column " +
                                 std::to_string(cols[i]) + " needs both " + std::to_string(cell) +
                                 " and " + std::to_string(value));
        }
        cell = value;
      }
    }
    fill_free_cells(state, row);
    append_counted(state, std::move(row), result);
  }
  return result;
}

StageResult run_coloring(CoverageState& state, StageGoal goal, VertexOrder order_kind) {
  StageResult result;
  result.work += state.space().size();
  const IncompatibilityGraph graph = build_incompatibility_graph(state, goal);
  const std::uint64_t edges = graph.edge_count();
  result.work += graph.build_work() + edges;

  std::vector<std::size_t> order;
  if (order_kind == VertexOrder::largest_first) {
    order = order_largest_first(graph);
    result.work += graph.vertex_count();
  } else {
    order = order_smallest_last(graph);
    result.work += 2 * edges;
  }
  const auto colors = greedy_color(graph, order);
  result.work += 2 * edges;

  const StageResult emitted = rows_from_coloring(state, graph, colors);
  result.rows_added += emitted.rows_added;
  result.work += emitted.work;
  return result;
}

}  // namespace msca
