#include "capmapf/satcore.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace capmapf {

Solver::Solver(SolverConfig config) : config_(config) {}

Var Solver::new_var() {
  std::uint32_t v = static_cast<std::uint32_t>(assigns_.size());
  assigns_.push_back(0);
  phase_.push_back(-1);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  double initial = 0;
  if (config_.seed != 0) {
    std::mt19937_64 rng(config_.seed ^ (0x9e3779b97f4a7c15ULL * (v + 1)));
    initial = static_cast<double>(rng() % 1000) * 1e-7;
  }
  activity_.push_back(initial);
  heap_pos_.push_back(-1);
  heap_insert(v);
  return static_cast<Var>(v + 1);
}

void Solver::ensure_vars(int count) {
  while (variable_count() < count) new_var();
}

bool Solver::add_clause(std::span<const Lit> lits) {
  if (!ok_) return false;
  cancel_until(0);
  for (Lit l : lits)
    if (l.var() < 1) throw std::invalid_argument("literal with variable 0");
  int highest = 0;
  for (Lit l : lits) highest = std::max(highest, l.var());
  ensure_vars(highest);

#ifndef NDEBUG
  original_.emplace_back(lits.begin(), lits.end());
#endif

  std::vector<ILit> c;
  c.reserve(lits.size());
  for (Lit l : lits) c.push_back(encode(l));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i + 1 < c.size() && c[i + 1] == neg(c[i])) return true;  // tautology
    std::int8_t val = value(c[i]);
    if (val > 0) return true;  // satisfied at root
    if (val == 0) c[j++] = c[i];
  }
  c.resize(j);

  if (c.empty()) {
    ok_ = false;
    return false;
  }
  if (c.size() == 1) {
    enqueue(c[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  attach(std::move(c), false);
  return true;
}

void Solver::add_formula(const CnfFormula& formula) {
  ensure_vars(formula.variable_count());
  for (std::size_t i = 0; i < formula.clause_count(); ++i) add_clause(formula.clause(i));
}

Solver::CRef Solver::attach(std::vector<ILit> lits, bool learnt) {
  CRef cref = static_cast<CRef>(clauses_.size());
  watches_[lits[0]].push_back({cref, lits[1]});
  watches_[lits[1]].push_back({cref, lits[0]});
  Clause c;
  c.lits = std::move(lits);
  c.learnt = learnt;
  clauses_.push_back(std::move(c));
  if (learnt) {
    learnts_.push_back(cref);
    ++stats_.learnt_clauses;
  }
  return cref;
}

void Solver::enqueue(ILit l, CRef reason) {
  std::uint32_t v = var_of(l);
  assigns_[v] = (l & 1u) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    ILit p = trail_[qhead_++];
    ILit false_lit = neg(p);
    std::vector<Watch>& ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      Watch w = ws[i++];
      if (value(w.blocker) > 0) {
        ws[j++] = w;
        continue;
      }
      std::vector<ILit>& c = clauses_[w.cref].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ILit first = c[0];
      if (first != w.blocker && value(first) > 0) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) >= 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) < 0) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

bool Solver::redundant(ILit l) const {
  CRef r = reason_[var_of(l)];
  if (r == kNoReason) return false;
  for (std::size_t k = 1; k < clauses_[r].lits.size(); ++k) {
    std::uint32_t v = var_of(clauses_[r].lits[k]);
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void Solver::analyze(CRef conflict, std::vector<ILit>& learnt, int& backjump) {
  learnt.clear();
  learnt.push_back(0);  // asserting literal goes here
  int open = 0;
  ILit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  CRef cref = conflict;

  do {
    Clause& c = clauses_[cref];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      ILit q = c.lits[k];
      std::uint32_t v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      bump_var(v);
      seen_[v] = 1;
      if (level_[v] >= decision_level())
        ++open;
      else
        learnt.push_back(q);
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    cref = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --open;
  } while (open > 0);
  learnt[0] = neg(p);

  // local minimization
  std::size_t j = 1;
  std::vector<ILit> dropped;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (redundant(learnt[i]))
      dropped.push_back(learnt[i]);
    else
      learnt[j++] = learnt[i];
  }
  learnt.resize(j);
  for (ILit l : dropped) seen_[var_of(l)] = 0;

  backjump = 0;
  if (learnt.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[best])]) best = i;
    std::swap(learnt[1], learnt[best]);
    backjump = level_[var_of(learnt[1])];
  }
  for (ILit l : learnt) seen_[var_of(l)] = 0;
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i > trail_lim_[level]; --i) {
    std::uint32_t v = var_of(trail_[i - 1]);
    phase_[v] = assigns_[v];
    assigns_[v] = 0;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

bool Solver::locked(CRef c) const {
  ILit first = clauses_[c].lits[0];
  return value(first) > 0 && reason_[var_of(first)] == c;
}

void Solver::reduce_learnts() {
  std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
    const Clause& ca = clauses_[a];
    const Clause& cb = clauses_[b];
    if ((ca.lits.size() > 2) != (cb.lits.size() > 2)) return ca.lits.size() > 2;
    if (ca.activity != cb.activity) return ca.activity < cb.activity;
    return a < b;
  });
  std::size_t half = learnts_.size() / 2;
  std::vector<CRef> kept;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    Clause& c = clauses_[learnts_[i]];
    if (i < half && c.lits.size() > 2 && !locked(learnts_[i])) {
      c.removed = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    } else {
      kept.push_back(learnts_[i]);
    }
  }
  learnts_ = std::move(kept);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watch& w) { return clauses_[w.cref].removed; }),
             ws.end());
}

void Solver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(Clause& c) {
  c.activity += static_cast<float>(clause_inc_);
  if (c.activity > 1e20f) {
    for (CRef r : learnts_) clauses_[r].activity *= 1e-20f;
    clause_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

void Solver::heap_down(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (true) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

std::uint32_t Solver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

std::optional<Solver::ILit> Solver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (assigns_[v] == 0) {
      ILit pos = 2u * v;
      return phase_[v] > 0 ? pos : neg(pos);
    }
  }
  return std::nullopt;
}

SatResult Solver::solve(const SatBudget& budget) {
  SatResult result;
  if (!ok_) {
    result.outcome = SatOutcome::kUnsat;
    return result;
  }
  cancel_until(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    result.outcome = SatOutcome::kUnsat;
    return result;
  }

  std::int64_t conflicts_at_start = stats_.conflicts;
  double restart_limit = config_.restart_first;
  std::int64_t conflicts_since_restart = 0;
  max_learnts_ = std::max(max_learnts_, clauses_.size() / 3.0 + 1000.0);
  std::vector<ILit> learnt;

  auto out_of_budget = [&]() {
    if (budget.conflict_limit >= 0 &&
        stats_.conflicts - conflicts_at_start >= budget.conflict_limit)
      return true;
    return budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline;
  };

  while (true) {
    CRef conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++conflicts_since_restart;
      if (decision_level() == 0) {
        ok_ = false;
        result.outcome = SatOutcome::kUnsat;
        return result;
      }
      int backjump = 0;
      analyze(conflict, learnt, backjump);
      cancel_until(backjump);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        CRef cref = attach(learnt, true);
        bump_clause(clauses_[cref]);
        enqueue(learnt[0], cref);
      }
      var_inc_ /= config_.var_decay;
      clause_inc_ /= config_.clause_decay;

      if ((stats_.conflicts & 63) == 0 && out_of_budget()) {
        cancel_until(0);
        result.outcome = SatOutcome::kUnknown;
        return result;
      }
      if (conflicts_since_restart >= restart_limit) {
        ++stats_.restarts;
        conflicts_since_restart = 0;
        restart_limit *= config_.restart_growth;
        max_learnts_ *= 1.1;
        cancel_until(0);
      }
      continue;
    }

    if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
      reduce_learnts();

    auto next = pick_branch();
    if (!next) {
      result.outcome = SatOutcome::kSat;
      result.model.assign(assigns_.size() + 1, false);
      for (std::size_t v = 0; v < assigns_.size(); ++v) result.model[v + 1] = assigns_[v] > 0;
#ifndef NDEBUG
      for (const auto& c : original_)
        assert(std::any_of(c.begin(), c.end(), [&](Lit l) { return result.value(l); }));
#endif
      cancel_until(0);
      return result;
    }
    ++stats_.decisions;
    if ((stats_.decisions & 1023) == 0 && out_of_budget()) {
      cancel_until(0);
      result.outcome = SatOutcome::kUnknown;
      return result;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(*next, kNoReason);
  }
}

}  // namespace capmapf
