#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "capmapf/instance.hpp"

namespace capmapf {

// Per-agent vertex sequences over synchronized time steps. Well-formed plans
// have one sequence per agent, all of the same length.
class Plan {
 public:
  Plan() = default;
  explicit Plan(std::vector<std::vector<VertexId>> paths) : paths_(std::move(paths)) {}

  int agent_count() const { return static_cast<int>(paths_.size()); }
  const std::vector<VertexId>& path(AgentId a) const { return paths_[a]; }
  const std::vector<std::vector<VertexId>>& paths() const { return paths_; }
  bool ragged() const;
  // Number of configurations (time steps + 1); 0 for an empty plan.
  int length() const { return paths_.empty() ? 0 : static_cast<int>(paths_.front().size()); }

  // Drops trailing configurations in which nobody moves any more.
  Plan trimmed() const;

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  std::vector<std::vector<VertexId>> paths_;
};

// Text format: one line per step `t: v(a_0) v(a_1) ...`, then
// `cost=<sum> makespan=<steps>`.
void write_plan(std::ostream& out, const Plan& plan);
std::string format_plan(const Plan& plan);
// Reads the step lines; the summary line is ignored. Throws ParseError.
Plan parse_plan(std::istream& in);

enum class ConflictKind {
  kCapacity,        // more agents than c(v) at v at time t
  kSwap,            // two agents cross one edge in opposite directions
  kOccupiedTarget,  // kNoFollow only: mover enters a vertex already full at t
};

// A rule violation found in a candidate plan.
//   kCapacity:       agents = occupants (sorted), vertex = v
//   kSwap:           agents = {a, b}, a moves from -> vertex, b moves vertex -> from
//   kOccupiedTarget: agents = {mover, occupants...}, mover moves from -> vertex
struct Conflict {
  ConflictKind kind = ConflictKind::kCapacity;
  int t = 0;
  std::vector<AgentId> agents;
  VertexId vertex = -1;
  VertexId from = -1;

  static Conflict capacity(std::vector<AgentId> occupants, VertexId v, int t);
  static Conflict swap(AgentId a, AgentId b, VertexId a_from, VertexId a_to, int t);
  static Conflict occupied_target(AgentId mover, VertexId from, VertexId to,
                                  std::vector<AgentId> occupants, int t);

  std::string describe() const;

  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};

}  // namespace capmapf
