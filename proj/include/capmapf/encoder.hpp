#pragma once

#include <optional>
#include <span>
#include <vector>

#include "capmapf/cnf.hpp"
#include "capmapf/instance.hpp"
#include "capmapf/mdd.hpp"
#include "capmapf/plan.hpp"

namespace capmapf {

enum class EncodingMode { kComplete, kBasic };

struct EncodeOptions {
  MoveRule rule = MoveRule::kAllowFollow;
};

struct EncodingArtifacts {
  EncodingMode mode = EncodingMode::kComplete;
  int xi = 0;
  int lower_bound = 0;
  int delta = 0;  // xi - lower_bound
  int horizon = 0;
  std::vector<int> agent_bounds;
  std::vector<Mdd> mdds;
  CnfFormula formula;
  // Set when some agent cannot reach its goal within the horizon; no formula
  // is built and the bound is unsatisfiable.
  bool empty_mdd = false;
  int conflict_clauses = 0;
};

// Complete model: satisfiable iff a plan with sum-of-costs <= xi exists.
// Throws UnsolvableError for unreachable goals and std::invalid_argument when
// xi is below the lower bound.
EncodingArtifacts encode_complete(const Instance& instance, int xi,
                                  const EncodeOptions& options = {});

// Relaxation without inter-agent constraints except the elimination clauses of
// the given conflicts.
EncodingArtifacts encode_basic(const Instance& instance, int xi,
                               std::span<const Conflict> conflicts,
                               const EncodeOptions& options = {});

// Elimination clause of a conflict over the artifacts' variables; nullopt when
// some involved variable does not exist (the clause would be satisfied anyway).
std::optional<std::vector<Lit>> conflict_clause(const EncodingArtifacts& artifacts,
                                                const Conflict& conflict);

// Reads the unique occupied vertex per agent and level. Throws std::logic_error
// when a level has zero or several true vertex variables.
Plan extract_plan(const EncodingArtifacts& artifacts, const std::vector<bool>& model);

}  // namespace capmapf
