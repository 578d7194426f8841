#include "capmapf/mdd.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "capmapf/error.hpp"
#include "capmapf/pathcalc.hpp"

namespace capmapf {

int compute_horizon(std::span<const int> agent_bounds, int xi) {
  int lower = std::accumulate(agent_bounds.begin(), agent_bounds.end(), 0);
  if (xi < lower)
    throw std::invalid_argument("cost bound " + std::to_string(xi) + " is below lower bound " +
                                std::to_string(lower));
  int longest = agent_bounds.empty() ? 0 : *std::max_element(agent_bounds.begin(), agent_bounds.end());
  return longest + (xi - lower);
}

int compute_horizon(const Instance& instance, int xi) {
  auto bounds = agent_lower_bounds(instance);
  return compute_horizon(bounds, xi);
}

Mdd::Mdd(AgentId agent, std::vector<std::vector<VertexId>> levels,
         std::vector<std::vector<MddArc>> arcs)
    : agent_(agent), levels_(std::move(levels)), arcs_(std::move(arcs)) {}

std::span<const MddArc> Mdd::outgoing(int t, VertexId from) const {
  const auto& row = arcs_[t];
  auto lo = std::lower_bound(row.begin(), row.end(), MddArc{from, -1});
  auto hi = lo;
  while (hi != row.end() && hi->from == from) ++hi;
  return {lo, hi};
}

bool Mdd::contains(int t, VertexId v) const {
  if (t < 0 || t > horizon()) return false;
  return std::binary_search(levels_[t].begin(), levels_[t].end(), v);
}

bool Mdd::has_arc(int t, VertexId from, VertexId to) const {
  if (t < 0 || t >= horizon()) return false;
  return std::binary_search(arcs_[t].begin(), arcs_[t].end(), MddArc{from, to});
}

std::size_t Mdd::node_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::size_t Mdd::arc_count() const {
  std::size_t n = 0;
  for (const auto& a : arcs_) n += a.size();
  return n;
}

Mdd build_mdd(const Instance& instance, AgentId agent, int horizon) {
  const Graph& g = instance.graph();
  const Agent& a = instance.agent(agent);
  DistanceField from_start = bfs_distances(g, a.start);
  DistanceField to_goal = bfs_distances(g, a.goal);
  if (!from_start.reachable(a.goal) || from_start[a.goal] > horizon)
    throw EmptyMddError("agent " + std::to_string(agent) + " cannot reach its goal within " +
                        std::to_string(horizon) + " steps");

  const int n = g.vertex_count();
  // alive[t][v]: v passes both distance filters at time t
  std::vector<std::vector<char>> alive(horizon + 1, std::vector<char>(n, 0));
  for (int t = 0; t <= horizon; ++t)
    for (VertexId v = 0; v < n; ++v)
      alive[t][v] = from_start.reachable(v) && from_start[v] <= t && to_goal[v] <= horizon - t;

  auto has_successor = [&](int t, VertexId u) {
    if (alive[t + 1][u]) return true;
    for (VertexId v : g.neighbors(u))
      if (alive[t + 1][v]) return true;
    return false;
  };
  auto has_predecessor = [&](int t, VertexId v) {
    if (alive[t - 1][v]) return true;
    for (VertexId u : g.neighbors(v))
      if (alive[t - 1][u]) return true;
    return false;
  };

  // Drop dead ends until every node lies on some start-goal path.
  for (bool changed = true; changed;) {
    changed = false;
    for (int t = 0; t <= horizon; ++t) {
      for (VertexId v = 0; v < n; ++v) {
        if (!alive[t][v]) continue;
        if ((t < horizon && !has_successor(t, v)) || (t > 0 && !has_predecessor(t, v))) {
          alive[t][v] = 0;
          changed = true;
        }
      }
    }
  }

  std::vector<std::vector<VertexId>> levels(horizon + 1);
  std::vector<std::vector<MddArc>> arcs(horizon);
  for (int t = 0; t <= horizon; ++t) {
    for (VertexId v = 0; v < n; ++v) {
      if (!alive[t][v]) continue;
      levels[t].push_back(v);
      if (t == horizon) continue;
      // neighbors are sorted; splice the wait arc in order
      bool wait_done = false;
      for (VertexId w : g.neighbors(v)) {
        if (!wait_done && v < w) {
          if (alive[t + 1][v]) arcs[t].push_back({v, v});
          wait_done = true;
        }
        if (alive[t + 1][w]) arcs[t].push_back({v, w});
      }
      if (!wait_done && alive[t + 1][v]) arcs[t].push_back({v, v});
    }
  }
  return Mdd(agent, std::move(levels), std::move(arcs));
}

std::string dump_mdd(const Mdd& mdd) {
  std::string out;
  for (int t = 0; t <= mdd.horizon(); ++t) {
    out += std::to_string(t) + ":";
    for (VertexId v : mdd.level(t)) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

}  // namespace capmapf
