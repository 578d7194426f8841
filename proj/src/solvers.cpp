#include "capmapf/solvers.hpp"

#include <chrono>
#include <functional>
#include <set>

#include "capmapf/encoder.hpp"
#include "capmapf/pathcalc.hpp"

namespace capmapf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outer {
  int lower_bound = 0;
  int ceiling = 0;
  Clock::time_point deadline;
};

Outer outer_bounds(const Instance& instance, const SolveLimits& limits, Clock::time_point start) {
  Outer o;
  o.lower_bound = cost_lower_bound(instance);
  o.ceiling = limits.xi_ceiling.value_or(
      o.lower_bound + instance.graph().vertex_count() * instance.agent_count());
  o.deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(limits.timeout_seconds));
  return o;
}

void for_each_subset(const std::vector<AgentId>& items, int size, std::vector<AgentId>& chosen,
                     std::size_t from, const std::function<void(const std::vector<AgentId>&)>& f) {
  if (static_cast<int>(chosen.size()) == size) {
    f(chosen);
    return;
  }
  for (std::size_t i = from; i < items.size(); ++i) {
    chosen.push_back(items[i]);
    for_each_subset(items, size, chosen, i + 1, f);
    chosen.pop_back();
  }
}

std::vector<Conflict> refinements_for(const Instance& instance, const Conflict& c,
                                      ConflictClauseMode mode) {
  if (mode == ConflictClauseMode::kFullSet || c.kind != ConflictKind::kCapacity) return {c};
  std::vector<Conflict> out;
  std::vector<AgentId> chosen;
  for_each_subset(c.agents, instance.capacities()[c.vertex] + 1, chosen, 0,
                  [&](const std::vector<AgentId>& subset) {
                    out.push_back(Conflict::capacity(subset, c.vertex, c.t));
                  });
  return out;
}

}  // namespace

int SolveReport::total_refinements() const {
  int total = 0;
  for (const auto& it : iterations) total += it.refinements;
  return total;
}

SolveReport solve_eager(const Instance& instance, const SolveOptions& options) {
  const auto start = Clock::now();
  Outer outer = outer_bounds(instance, options.limits, start);
  SolveReport report;
  EncodeOptions encode_options{options.rule};

  for (int xi = outer.lower_bound; xi <= outer.ceiling; ++xi) {
    if (Clock::now() >= outer.deadline) {
      report.exhausted_reason = "timeout";
      return report;
    }
    const auto iter_start = Clock::now();
    EncodingArtifacts art = encode_complete(instance, xi, encode_options);
    IterationRecord rec{xi, art.horizon, SatOutcome::kUnsat, 0, art.formula.variable_count(),
                        art.formula.clause_count(), 0};
    if (art.empty_mdd) {
      rec.seconds = seconds_since(iter_start);
      report.iterations.push_back(rec);
      continue;
    }
    Solver solver(options.sat);
    solver.add_formula(art.formula);
    SatResult result = solver.solve(SatBudget{-1, outer.deadline});
    rec.outcome = result.outcome;
    rec.seconds = seconds_since(iter_start);
    report.iterations.push_back(rec);
    if (result.outcome == SatOutcome::kUnknown) {
      report.exhausted_reason = "timeout";
      return report;
    }
    if (result.outcome == SatOutcome::kSat) {
      report.plan = extract_plan(art, result.model);
      report.optimal_cost = xi;
      report.status = SolveStatus::kSolved;
      return report;
    }
  }
  report.exhausted_reason = "cost ceiling";
  return report;
}

SolveReport solve_lazy(const Instance& instance, const SolveOptions& options) {
  const auto start = Clock::now();
  Outer outer = outer_bounds(instance, options.limits, start);
  SolveReport report;
  EncodeOptions encode_options{options.rule};
  std::vector<Conflict> conflicts;  // insertion order, re-encoded at each bound
  std::set<Conflict> known;

  for (int xi = outer.lower_bound; xi <= outer.ceiling; ++xi) {
    if (Clock::now() >= outer.deadline) {
      report.exhausted_reason = "timeout";
      return report;
    }
    const auto iter_start = Clock::now();
    EncodingArtifacts art = encode_basic(instance, xi, conflicts, encode_options);
    IterationRecord rec{xi, art.horizon, SatOutcome::kUnsat, 0, art.formula.variable_count(), 0, 0};
    if (art.empty_mdd) {
      rec.seconds = seconds_since(iter_start);
      report.iterations.push_back(rec);
      continue;
    }
    Solver solver(options.sat);
    solver.add_formula(art.formula);

    while (true) {
      SatResult result = solver.solve(SatBudget{-1, outer.deadline});
      rec.outcome = result.outcome;
      if (result.outcome != SatOutcome::kSat) break;

      Plan candidate = extract_plan(art, result.model);
      std::vector<Conflict> found = validate_candidate(instance, candidate, options.rule);
      if (found.empty()) {
        rec.clauses = art.formula.clause_count();
        rec.seconds = seconds_since(iter_start);
        report.iterations.push_back(rec);
        report.plan = std::move(candidate);
        report.optimal_cost = xi;
        report.status = SolveStatus::kSolved;
        return report;
      }
      for (const Conflict& c : found) {
        for (Conflict& r : refinements_for(instance, c, options.conflict_mode)) {
          auto clause = conflict_clause(art, r);
          if (!clause) continue;
          art.formula.add_clause(*clause);
          solver.add_clause(*clause);
          ++rec.refinements;
          if (known.insert(r).second) conflicts.push_back(std::move(r));
        }
      }
    }
    rec.clauses = art.formula.clause_count();
    rec.seconds = seconds_since(iter_start);
    report.iterations.push_back(rec);
    if (rec.outcome == SatOutcome::kUnknown) {
      report.exhausted_reason = "timeout";
      return report;
    }
  }
  report.exhausted_reason = "cost ceiling";
  return report;
}

std::vector<Conflict> validate_candidate(const Instance& instance, const Plan& plan,
                                         MoveRule rule) {
  std::vector<Conflict> conflicts;
  const int k = plan.agent_count();
  const int steps = plan.length();
  const int n = instance.graph().vertex_count();
  std::vector<std::vector<AgentId>> at(n);

  for (int t = 0; t < steps; ++t) {
    for (auto& list : at) list.clear();
    for (AgentId a = 0; a < k; ++a) at[plan.path(a)[t]].push_back(a);

    for (VertexId v = 0; v < n; ++v)
      if (static_cast<int>(at[v].size()) > instance.capacities()[v])
        conflicts.push_back(Conflict::capacity(at[v], v, t));

    if (t + 1 == steps) break;
    for (AgentId i = 0; i < k; ++i) {
      VertexId u = plan.path(i)[t];
      VertexId v = plan.path(i)[t + 1];
      if (u == v) continue;
      for (AgentId j : at[v])
        if (j > i && plan.path(j)[t + 1] == u) conflicts.push_back(Conflict::swap(i, j, u, v, t));
      if (rule == MoveRule::kNoFollow &&
          static_cast<int>(at[v].size()) >= instance.capacities()[v])
        conflicts.push_back(Conflict::occupied_target(i, u, v, at[v], t));
    }
  }
  return conflicts;
}

}  // namespace capmapf
