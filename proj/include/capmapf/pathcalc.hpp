#pragma once

#include <optional>
#include <vector>

#include "capmapf/instance.hpp"

namespace capmapf {

// Unweighted shortest-path distances from one source.
class DistanceField {
 public:
  static constexpr int kUnreachable = -1;

  DistanceField(VertexId source, std::vector<int> dist)
      : source_(source), dist_(std::move(dist)) {}

  VertexId source() const { return source_; }
  bool reachable(VertexId v) const { return dist_[v] != kUnreachable; }
  // kUnreachable for vertices in other components.
  int operator[](VertexId v) const { return dist_[v]; }
  std::optional<int> at(VertexId v) const {
    if (!reachable(v)) return std::nullopt;
    return dist_[v];
  }
  int size() const { return static_cast<int>(dist_.size()); }

 private:
  VertexId source_;
  std::vector<int> dist_;
};

DistanceField bfs_distances(const Graph& graph, VertexId source);

// Shortest start-goal distance per agent. Throws UnsolvableError if a goal is
// unreachable.
std::vector<int> agent_lower_bounds(const Instance& instance);

// Sum of the per-agent shortest path lengths.
int cost_lower_bound(const Instance& instance);

}  // namespace capmapf
