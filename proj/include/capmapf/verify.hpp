#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capmapf/instance.hpp"
#include "capmapf/plan.hpp"

namespace capmapf {

enum class ViolationKind {
  kStructure,       // wrong agent count, ragged or empty paths, unknown vertex ids
  kWrongStart,
  kWrongGoal,
  kNotEdge,         // consecutive vertices neither equal nor adjacent
  kSwap,            // opposite traversal of one edge in one step
  kOverCapacity,    // more agents than c(v) at v
  kOccupiedTarget,  // kNoFollow only
};

struct Violation {
  ViolationKind kind;
  int t = -1;
  std::vector<AgentId> agents;
  VertexId u = -1;
  VertexId v = -1;
  std::string detail;

  std::string describe() const;
};

// Empty iff the plan is a valid solution: every agent starts and ends at its
// endpoints, moves along edges or waits, no swaps, capacities respected in
// every configuration.
std::vector<Violation> validate_plan(const Instance& instance, const Plan& plan,
                                     MoveRule rule = MoveRule::kAllowFollow);

// Time of final arrival: moves and waits count until the agent reaches its last
// vertex for good; waits after that are free.
int individual_cost(const std::vector<VertexId>& path);
int sum_of_costs(const Plan& plan);
int makespan(const Plan& plan);

struct OracleResult {
  bool solvable = false;
  int cost = -1;
  Plan witness;
};

// Exhaustive search over joint move/wait sequences of at most `max_steps`
// steps. Refuses (std::invalid_argument) beyond 3 agents, 12 vertices or 8
// steps.
OracleResult brute_force_optimal(const Instance& instance, int max_steps,
                                 MoveRule rule = MoveRule::kAllowFollow);

}  // namespace capmapf
