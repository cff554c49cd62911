#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "msca/core.hpp"
#include "msca/stage.hpp"

namespace msca {

/// One missing coverage unit: interaction `rank`, coverage slot `slot`.
struct Vertex {
  Rank rank = 0;
  std::uint32_t slot = 0;

  bool operator==(const Vertex&) const = default;
};

/// Higher-index incompatibility graph.
///
/// Vertices are (interaction, slot) pairs with alpha <= slot < beta and
/// slot >= count, sorted ascending by (rank, slot). Two vertices are adjacent
/// when their interactions share a column with different values, or when they
/// are distinct slots of the same interaction.
///
/// Slots of one interaction are twins, so the graph is stored as a conflict
/// graph over interaction groups: each group is a clique of its slots, and two
/// conflicting groups are completely joined. Arbitrary simple graphs are
/// representable with singleton groups (see from_edges).
class IncompatibilityGraph {
 public:
  IncompatibilityGraph() = default;

  /// Simple graph on vertices 0..n-1, each its own group (rank = index,
  /// slot 0). Self-loops and duplicate edges are ignored.
  static IncompatibilityGraph from_edges(std::size_t n,
                                         std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::span<const Vertex> vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }

  std::size_t degree(std::size_t v) const;
  std::uint64_t edge_count() const;
  bool adjacent(std::size_t a, std::size_t b) const;

  /// Calls fn(u) for every neighbour u of v.
  template <typename Fn>
  void for_each_neighbor(std::size_t v, Fn&& fn) const {
    const std::size_t g = group_of_[v];
    for (std::size_t u = group_start_[g]; u < group_start_[g + 1]; ++u) {
      if (u != v) {
        fn(u);
      }
    }
    for (std::size_t e = adj_start_[g]; e < adj_start_[g + 1]; ++e) {
      const std::size_t h = adj_[e];
      for (std::size_t u = group_start_[h]; u < group_start_[h + 1]; ++u) {
        fn(u);
      }
    }
  }

  /// Interaction-pair conflict checks spent building the graph.
  std::uint64_t build_work() const { return build_work_; }

 private:
  friend IncompatibilityGraph build_incompatibility_graph(const CoverageState&, StageGoal);

  void finalize(std::vector<std::vector<std::size_t>> group_adjacency);

  std::vector<Vertex> vertices_;
  std::vector<std::size_t> group_of_;
  std::vector<std::size_t> group_start_{0};
  std::vector<std::size_t> adj_start_{0};
  std::vector<std::size_t> adj_;
  std::vector<std::size_t> group_degree_;
  std::uint64_t build_work_ = 0;
};

IncompatibilityGraph build_incompatibility_graph(const CoverageState& state, StageGoal goal);

enum class VertexOrder { largest_first, smallest_last };

/// Non-increasing degree; ties by ascending vertex index.
std::vector<std::size_t> order_largest_first(const IncompatibilityGraph& graph);

/// Every vertex has minimum degree in the subgraph induced by itself and the
/// vertices before it. Built by repeatedly removing a minimum-degree vertex
/// (ties: smallest index) and placing it in front of those already removed.
std::vector<std::size_t> order_smallest_last(const IncompatibilityGraph& graph);

/// Greedy colouring along `order`: each vertex takes the smallest colour not
/// used by an already coloured neighbour. Throws std::invalid_argument if
/// order is not a permutation of the vertices.
std::vector<std::uint32_t> greedy_color(const IncompatibilityGraph& graph,
                                        std::span<const std::size_t> order);

/// Emits one row per colour in ascending colour order. Each row fixes the
/// values of every interaction coloured with it; remaining cells take the
/// least frequent symbol. Throws std::logic_error if two vertices of one
/// colour demand different values in a column.
StageResult rows_from_coloring(CoverageState& state, const IncompatibilityGraph& graph,
                               std::span<const std::uint32_t> colors);

StageResult run_coloring(CoverageState& state, StageGoal goal, VertexOrder order);

}  // namespace msca
