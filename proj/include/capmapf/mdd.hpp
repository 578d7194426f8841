#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capmapf/instance.hpp"

namespace capmapf {

// Makespan that accommodates every plan of sum-of-costs at most xi:
// the longest single-agent distance plus the slack xi - sum of distances.
// Throws std::invalid_argument when xi is below the lower bound.
int compute_horizon(std::span<const int> agent_bounds, int xi);
int compute_horizon(const Instance& instance, int xi);

struct MddArc {
  VertexId from;
  VertexId to;  // equal to `from` for a wait

  friend auto operator<=>(const MddArc&, const MddArc&) = default;
};

// Time-expanded graph of one agent restricted to the vertices through which
// some start-to-goal walk of exactly `horizon` steps passes.
class Mdd {
 public:
  Mdd(AgentId agent, std::vector<std::vector<VertexId>> levels,
      std::vector<std::vector<MddArc>> arcs);

  AgentId agent() const { return agent_; }
  int horizon() const { return static_cast<int>(levels_.size()) - 1; }

  // Sorted vertex ids present at time t.
  std::span<const VertexId> level(int t) const { return levels_[t]; }
  // Arcs from level t to level t+1, sorted by (from, to).
  std::span<const MddArc> arcs(int t) const { return arcs_[t]; }
  std::span<const MddArc> outgoing(int t, VertexId from) const;
  bool contains(int t, VertexId v) const;
  bool has_arc(int t, VertexId from, VertexId to) const;

  std::size_t node_count() const;
  std::size_t arc_count() const;

 private:
  AgentId agent_;
  std::vector<std::vector<VertexId>> levels_;
  std::vector<std::vector<MddArc>> arcs_;
};

// Throws EmptyMddError when the goal is farther than `horizon`.
Mdd build_mdd(const Instance& instance, AgentId agent, int horizon);

// One line per level: `t: v v v`.
std::string dump_mdd(const Mdd& mdd);

}  // namespace capmapf
