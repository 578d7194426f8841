#include "capmapf/verify.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace capmapf {

std::string Violation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case ViolationKind::kStructure: out << "STRUCTURE"; break;
    case ViolationKind::kWrongStart: out << "WRONG_START"; break;
    case ViolationKind::kWrongGoal: out << "WRONG_GOAL"; break;
    case ViolationKind::kNotEdge: out << "NOT_EDGE"; break;
    case ViolationKind::kSwap: out << "SWAP"; break;
    case ViolationKind::kOverCapacity: out << "OVER_CAPACITY"; break;
    case ViolationKind::kOccupiedTarget: out << "OCCUPIED_TARGET"; break;
  }
  if (t >= 0) out << " t=" << t;
  if (!agents.empty()) {
    out << " agents=";
    for (std::size_t i = 0; i < agents.size(); ++i) out << (i ? "," : "") << agents[i];
  }
  if (u >= 0) out << " u=" << u;
  if (v >= 0) out << " v=" << v;
  if (!detail.empty()) out << " (" << detail << ")";
  return out.str();
}

std::vector<Violation> validate_plan(const Instance& instance, const Plan& plan, MoveRule rule) {
  std::vector<Violation> out;
  const Graph& g = instance.graph();
  const int k = instance.agent_count();

  if (plan.agent_count() != k) {
    out.push_back({ViolationKind::kStructure, -1, {}, -1, -1,
                   "plan has " + std::to_string(plan.agent_count()) + " agents, instance has " +
                       std::to_string(k)});
    return out;
  }
  if (k == 0) return out;
  if (plan.ragged() || plan.length() == 0) {
    out.push_back({ViolationKind::kStructure, -1, {}, -1, -1, "paths are empty or of unequal length"});
    return out;
  }
  for (AgentId a = 0; a < k; ++a)
    for (int t = 0; t < plan.length(); ++t)
      if (!g.valid(plan.path(a)[t])) {
        out.push_back({ViolationKind::kStructure, t, {a}, -1, plan.path(a)[t], "unknown vertex"});
        return out;
      }

  for (AgentId a = 0; a < k; ++a) {
    const auto& p = plan.path(a);
    if (p.front() != instance.agent(a).start)
      out.push_back({ViolationKind::kWrongStart, 0, {a}, -1, p.front(), ""});
    if (p.back() != instance.agent(a).goal)
      out.push_back({ViolationKind::kWrongGoal, plan.length() - 1, {a}, -1, p.back(), ""});
  }

  for (int t = 0; t < plan.length(); ++t) {
    std::vector<std::vector<AgentId>> occupants(g.vertex_count());
    for (AgentId a = 0; a < k; ++a) occupants[plan.path(a)[t]].push_back(a);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (static_cast<int>(occupants[v].size()) > instance.capacities()[v])
        out.push_back({ViolationKind::kOverCapacity, t, occupants[v], -1, v, ""});

    if (t + 1 == plan.length()) break;
    for (AgentId a = 0; a < k; ++a) {
      VertexId from = plan.path(a)[t];
      VertexId to = plan.path(a)[t + 1];
      if (from == to) continue;
      if (!g.adjacent(from, to)) {
        out.push_back({ViolationKind::kNotEdge, t, {a}, from, to, ""});
        continue;
      }
      for (AgentId b = a + 1; b < k; ++b)
        if (plan.path(b)[t] == to && plan.path(b)[t + 1] == from)
          out.push_back({ViolationKind::kSwap, t, {a, b}, from, to, ""});
      if (rule == MoveRule::kNoFollow &&
          static_cast<int>(occupants[to].size()) >= instance.capacities()[to])
        out.push_back({ViolationKind::kOccupiedTarget, t, {a}, from, to, ""});
    }
  }
  return out;
}

int individual_cost(const std::vector<VertexId>& path) {
  for (std::size_t t = path.size(); t-- > 0;)
    if (path[t] != path.back()) return static_cast<int>(t) + 1;
  return 0;
}

int sum_of_costs(const Plan& plan) {
  int total = 0;
  for (const auto& p : plan.paths()) total += individual_cost(p);
  return total;
}

int makespan(const Plan& plan) {
  int longest = 0;
  for (const auto& p : plan.paths()) longest = std::max(longest, individual_cost(p));
  return longest;
}

namespace {

// Joint state: every agent's vertex plus the set of agents that have committed
// to staying at their goal. Uncommitted agents pay one per step.
struct JointSpace {
  int n;
  int k;
  int encode(const std::vector<VertexId>& pos, unsigned settled) const {
    int code = 0;
    for (int i = k - 1; i >= 0; --i) code = code * n + pos[i];
    return (code << k) | static_cast<int>(settled);
  }
  void decode(int code, std::vector<VertexId>& pos, unsigned& settled) const {
    settled = static_cast<unsigned>(code) & ((1u << k) - 1u);
    code >>= k;
    pos.resize(k);
    for (int i = 0; i < k; ++i) {
      pos[i] = code % n;
      code /= n;
    }
  }
  int size() const {
    int s = 1;
    for (int i = 0; i < k; ++i) s *= n;
    return s << k;
  }
};

bool step_allowed(const Instance& inst, const std::vector<VertexId>& cur,
                  const std::vector<VertexId>& next, MoveRule rule) {
  const int k = static_cast<int>(cur.size());
  for (int i = 0; i < k; ++i) {
    int load = 0;
    int before = 0;
    for (int j = 0; j < k; ++j) {
      if (next[j] == next[i]) ++load;
      if (cur[j] == next[i]) ++before;
      if (j != i && cur[i] != next[i] && cur[j] == next[i] && next[j] == cur[i]) return false;
    }
    if (load > inst.capacities()[next[i]]) return false;
    if (rule == MoveRule::kNoFollow && cur[i] != next[i] && before >= inst.capacities()[next[i]])
      return false;
  }
  return true;
}

}  // namespace

OracleResult brute_force_optimal(const Instance& instance, int max_steps, MoveRule rule) {
  const int k = instance.agent_count();
  const int n = instance.graph().vertex_count();
  if (k > 3 || n > 12 || max_steps > 8 || max_steps < 0)
    throw std::invalid_argument("brute-force oracle limited to 3 agents, 12 vertices, 8 steps");

  const Graph& g = instance.graph();
  JointSpace space{n, k};
  constexpr int kInf = std::numeric_limits<int>::max();
  const unsigned all = (1u << k) - 1u;

  std::vector<std::vector<int>> cost(max_steps + 1, std::vector<int>(space.size(), kInf));
  std::vector<std::vector<int>> parent(max_steps + 1, std::vector<int>(space.size(), -1));

  std::vector<VertexId> start(k);
  unsigned at_goal_mask = 0;
  for (int i = 0; i < k; ++i) {
    start[i] = instance.agent(i).start;
    if (start[i] == instance.agent(i).goal) at_goal_mask |= 1u << i;
  }
  for (unsigned s = at_goal_mask;; s = (s - 1) & at_goal_mask) {
    cost[0][space.encode(start, s)] = 0;
    if (s == 0) break;
  }

  std::vector<VertexId> pos;
  std::vector<VertexId> next(k);
  std::vector<std::vector<VertexId>> options(k);
  for (int t = 0; t < max_steps; ++t) {
    for (int code = 0; code < space.size(); ++code) {
      const int base = cost[t][code];
      if (base == kInf) continue;
      unsigned settled = 0;
      space.decode(code, pos, settled);
      const int step_cost = k - std::popcount(settled);
      for (int i = 0; i < k; ++i) {
        options[i].assign(1, pos[i]);
        if (!(settled & (1u << i)))
          for (VertexId w : g.neighbors(pos[i])) options[i].push_back(w);
      }
      // odometer over every agent's move choice
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        for (int i = 0; i < k; ++i) next[i] = options[i][pick[i]];
        if (step_allowed(instance, pos, next, rule)) {
          unsigned may_settle = 0;
          for (int i = 0; i < k; ++i)
            if (!(settled & (1u << i)) && next[i] == instance.agent(i).goal) may_settle |= 1u << i;
          for (unsigned s = may_settle;; s = (s - 1) & may_settle) {
            int to = space.encode(next, settled | s);
            if (base + step_cost < cost[t + 1][to]) {
              cost[t + 1][to] = base + step_cost;
              parent[t + 1][to] = code;
            }
            if (s == 0) break;
          }
        }
        int i = 0;
        while (i < k && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == k) break;
      }
    }
  }

  std::vector<VertexId> goals(k);
  for (int i = 0; i < k; ++i) goals[i] = instance.agent(i).goal;
  const int final_code = space.encode(goals, all);
  OracleResult result;
  // Shorter horizons are covered: settled agents wait for free, so the best
  // cost is non-increasing in t. Take the earliest layer that attains the best.
  int best_t = -1;
  for (int t = 0; t <= max_steps; ++t)
    if (cost[t][final_code] != kInf && (best_t < 0 || cost[t][final_code] < cost[best_t][final_code]))
      best_t = t;
  if (best_t < 0) return result;

  result.solvable = true;
  result.cost = cost[best_t][final_code];
  std::vector<std::vector<VertexId>> paths(k, std::vector<VertexId>(best_t + 1));
  int code = final_code;
  for (int t = best_t; t >= 0; --t) {
    unsigned settled = 0;
    space.decode(code, pos, settled);
    for (int i = 0; i < k; ++i) paths[i][t] = pos[i];
    code = parent[t][code];
  }
  result.witness = Plan(std::move(paths));
  return result;
}

}  // namespace capmapf
