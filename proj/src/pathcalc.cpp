#include "capmapf/pathcalc.hpp"

#include <numeric>
#include <queue>

#include "capmapf/error.hpp"

namespace capmapf {

DistanceField bfs_distances(const Graph& graph, VertexId source) {
  std::vector<int> dist(graph.vertex_count(), DistanceField::kUnreachable);
  std::queue<VertexId> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop();
    for (VertexId v : graph.neighbors(u)) {
      if (dist[v] == DistanceField::kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push(v);
      }
    }
  }
  return DistanceField(source, std::move(dist));
}

std::vector<int> agent_lower_bounds(const Instance& instance) {
  std::vector<int> bounds;
  bounds.reserve(instance.agent_count());
  for (const Agent& a : instance.agents()) {
    DistanceField field = bfs_distances(instance.graph(), a.start);
    if (!field.reachable(a.goal))
      throw UnsolvableError("agent " + std::to_string(a.id) + " cannot reach its goal");
    bounds.push_back(field[a.goal]);
  }
  return bounds;
}

int cost_lower_bound(const Instance& instance) {
  auto bounds = agent_lower_bounds(instance);
  return std::accumulate(bounds.begin(), bounds.end(), 0);
}

}  // namespace capmapf
