#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "capmapf/cnf.hpp"
#include "capmapf/literal.hpp"

namespace capmapf {

enum class SatOutcome { kSat, kUnsat, kUnknown };

struct SatResult {
  SatOutcome outcome = SatOutcome::kUnknown;
  std::vector<bool> model;  // indexed by Var, entry 0 unused; empty unless kSat

  bool value(Var v) const { return model[v]; }
  bool value(Lit l) const { return model[l.var()] != l.negated(); }
};

// Limits for one solve() call. kUnknown is returned when either is hit.
struct SatBudget {
  std::int64_t conflict_limit = -1;  // negative: unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SolverConfig {
  std::uint64_t seed = 0;  // nonzero perturbs initial activities
  double var_decay = 0.95;
  double clause_decay = 0.999;
  int restart_first = 100;
  double restart_growth = 1.5;
};

struct SolverStats {
  std::int64_t conflicts = 0;
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t restarts = 0;
  std::int64_t learnt_clauses = 0;
};

// CDCL solver: two watched literals, first-UIP learning with local
// minimization, VSIDS branching with phase saving, geometric restarts and
// activity-based learnt clause deletion. Clauses may be added between solve()
// calls; learnt clauses are kept.
class Solver {
 public:
  explicit Solver(SolverConfig config = {});

  Var new_var();
  void ensure_vars(int count);
  int variable_count() const { return static_cast<int>(assigns_.size()); }

  // Returns false once the clause set is known to be unsatisfiable. An empty
  // clause makes it so permanently.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  void add_formula(const CnfFormula& formula);

  SatResult solve(const SatBudget& budget = {});

  bool consistent() const { return ok_; }
  const SolverStats& stats() const { return stats_; }

 private:
  using ILit = std::uint32_t;  // 2 * (var - 1) + sign
  using CRef = std::int32_t;
  static constexpr CRef kNoReason = -1;

  struct Clause {
    std::vector<ILit> lits;
    float activity = 0;
    bool learnt = false;
    bool removed = false;
  };
  struct Watch {
    CRef cref;
    ILit blocker;
  };

  static ILit encode(Lit l) {
    return 2u * static_cast<ILit>(l.var() - 1) + (l.negated() ? 1u : 0u);
  }
  static std::uint32_t var_of(ILit l) { return l >> 1; }
  static ILit neg(ILit l) { return l ^ 1u; }

  // 1 true, -1 false, 0 unassigned
  std::int8_t value(ILit l) const {
    std::int8_t a = assigns_[var_of(l)];
    return (l & 1u) ? static_cast<std::int8_t>(-a) : a;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(ILit l, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<ILit>& learnt, int& backjump);
  bool redundant(ILit l) const;
  void cancel_until(int level);
  CRef attach(std::vector<ILit> lits, bool learnt);
  void reduce_learnts();
  bool locked(CRef c) const;
  std::optional<ILit> pick_branch();

  void bump_var(std::uint32_t v);
  void bump_clause(Clause& c);
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  std::uint32_t heap_pop();

  SolverConfig config_;
  SolverStats stats_;
  bool ok_ = true;

  std::vector<Clause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watch>> watches_;  // by literal that is watched
  std::vector<std::int8_t> assigns_;
  std::vector<std::int8_t> phase_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<ILit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_pos_;  // -1 when not in heap

  mutable std::vector<char> seen_;
  double max_learnts_ = 0;

#ifndef NDEBUG
  std::vector<std::vector<Lit>> original_;
#endif
};

}  // namespace capmapf
