#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capmapf/instance.hpp"
#include "capmapf/plan.hpp"
#include "capmapf/satcore.hpp"

namespace capmapf {

struct SolveLimits {
  // Highest sum-of-costs bound tried; default lower bound + |V| * k.
  std::optional<int> xi_ceiling;
  double timeout_seconds = 500.0;
};

// How a capacity conflict among m > c(v) agents is refined: one clause over the
// whole set, or one clause per (c(v)+1)-subset.
enum class ConflictClauseMode { kFullSet, kSubsets };

struct SolveOptions {
  SolveLimits limits;
  MoveRule rule = MoveRule::kAllowFollow;
  ConflictClauseMode conflict_mode = ConflictClauseMode::kFullSet;
  SolverConfig sat;
};

enum class SolveStatus { kSolved, kResourceExhausted };

struct IterationRecord {
  int xi = 0;
  int horizon = 0;
  SatOutcome outcome = SatOutcome::kUnknown;
  int refinements = 0;
  int variables = 0;
  std::size_t clauses = 0;
  double seconds = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kResourceExhausted;
  std::optional<Plan> plan;  // full-horizon plan when solved
  int optimal_cost = -1;
  std::vector<IterationRecord> iterations;
  std::string exhausted_reason;  // "timeout" or "cost ceiling"

  bool solved() const { return status == SolveStatus::kSolved; }
  int total_refinements() const;
};

// Iterates the cost bound upward from the lower bound on the complete model.
// Throws UnsolvableError when some goal is unreachable.
SolveReport solve_eager(const Instance& instance, const SolveOptions& options = {});

// Same outer loop on the relaxed model, refined with conflict elimination
// clauses until the candidate is conflict-free or the SAT core says UNSAT.
// Conflicts persist across bounds.
SolveReport solve_lazy(const Instance& instance, const SolveOptions& options = {});

// Every rule violation in a candidate: one capacity conflict per overfull
// (v, t) with its full occupant set, one swap conflict per crossed edge, and
// under kNoFollow one conflict per move into a vertex already full at t.
std::vector<Conflict> validate_candidate(const Instance& instance, const Plan& plan,
                                         MoveRule rule = MoveRule::kAllowFollow);

}  // namespace capmapf
