#include <doctest.h>

#include <map>
#include <set>

#include "capmapf/encoder.hpp"
#include "capmapf/error.hpp"
#include "capmapf/mdd.hpp"
#include "capmapf/pathcalc.hpp"
#include "capmapf/satcore.hpp"
#include "capmapf/solvers.hpp"
#include "capmapf/verify.hpp"
#include "support/oracles.hpp"

using namespace capmapf;
using capmapf::testing::make_instance;
using capmapf::testing::p3_swap;

namespace {

SatResult solve(const CnfFormula& f) {
  Solver s;
  s.add_formula(f);
  return s.solve();
}

int occupancy(const Plan& plan, VertexId v, int t) {
  int n = 0;
  for (const auto& p : plan.paths()) n += p[t] == v;
  return n;
}

}  // namespace

TEST_CASE("single agent on P3") {
  Instance inst = make_instance(path_graph(3), {1, 1, 1}, {{0, 2}});
  auto art = encode_complete(inst, 2);
  CHECK(art.horizon == 2);
  CHECK(art.delta == 0);
  SatResult r = solve(art.formula);
  REQUIRE(r.outcome == SatOutcome::kSat);
  CHECK(extract_plan(art, r.model) == Plan({{0, 1, 2}}));
}

TEST_CASE("agent already home decodes to a constant path") {
  Instance inst = make_instance(path_graph(3), {1, 1, 1}, {{2, 2}, {0, 1}});
  auto art = encode_complete(inst, 1);
  SatResult r = solve(art.formula);
  REQUIRE(r.outcome == SatOutcome::kSat);
  Plan plan = extract_plan(art, r.model);
  CHECK(plan.path(0) == std::vector<VertexId>(plan.length(), 2));
}

TEST_CASE("swap on P3 with unit capacities is unsat at every bound") {
  for (int xi = 4; xi <= 8; ++xi) {
    auto art = encode_complete(p3_swap(1), xi);
    CHECK(solve(art.formula).outcome == SatOutcome::kUnsat);
  }
}

TEST_CASE("swap on P3 with a roomy middle vertex") {
  Instance inst = p3_swap(2);
  for (int xi : {4, 5, 6}) {
    auto art = encode_complete(inst, xi);
    SatResult r = solve(art.formula);
    REQUIRE(r.outcome == SatOutcome::kSat);
    Plan plan = extract_plan(art, r.model);
    CHECK(validate_plan(inst, plan).empty());
    CHECK(sum_of_costs(plan) <= xi);
    bool shared = false;
    for (int t = 0; t < plan.length(); ++t) shared = shared || occupancy(plan, 1, t) == 2;
    CHECK(shared);
  }
}

TEST_CASE("encode contract errors") {
  CHECK_THROWS_AS(encode_complete(p3_swap(1), 3), std::invalid_argument);
  std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}};
  Instance split = make_instance(Graph::from_edges(3, edges), {1, 1, 1}, {{0, 2}});
  CHECK_THROWS_AS(encode_complete(split, 5), UnsolvableError);
}

TEST_CASE("extract_plan rejects a model with an empty level") {
  Instance inst = make_instance(path_graph(3), {1, 1, 1}, {{0, 2}});
  auto art = encode_complete(inst, 2);
  std::vector<bool> all_false(art.formula.variable_count() + 1, false);
  CHECK_THROWS_AS(extract_plan(art, all_false), std::logic_error);
  auto wide = encode_complete(inst, 4);
  std::vector<bool> wide_true(wide.formula.variable_count() + 1, true);
  CHECK_THROWS_AS(extract_plan(wide, wide_true), std::logic_error);
}

TEST_CASE("basic encoding is a relaxation") {
  SUBCASE("no conflicts: the unit swap collides") {
    Instance inst = p3_swap(1);
    auto art = encode_basic(inst, 4, {});
    SatResult r = solve(art.formula);
    REQUIRE(r.outcome == SatOutcome::kSat);
    Plan plan = extract_plan(art, r.model);
    CHECK_FALSE(validate_candidate(inst, plan).empty());
  }
  SUBCASE("a capacity conflict is respected") {
    Instance inst = p3_swap(1);
    Conflict c = Conflict::capacity({0, 1}, 1, 1);
    for (int xi = 4; xi <= 6; ++xi) {
      auto art = encode_basic(inst, xi, std::span<const Conflict>(&c, 1));
      CHECK(art.conflict_clauses == 1);
      SatResult r = solve(art.formula);
      if (r.outcome != SatOutcome::kSat) continue;
      Plan plan = extract_plan(art, r.model);
      CHECK(occupancy(plan, 1, 1) < 2);
    }
  }
  SUBCASE("a conflict on absent variables adds nothing") {
    Instance inst = make_instance(path_graph(3), {1, 1, 1}, {{0, 2}, {2, 0}});
    Conflict c = Conflict::capacity({0, 1}, 0, 3);  // t beyond the horizon
    auto art = encode_basic(inst, 4, std::span<const Conflict>(&c, 1));
    CHECK(art.conflict_clauses == 0);
    CHECK_FALSE(conflict_clause(art, c).has_value());
  }
}

TEST_CASE("unit capacities produce exactly the pairwise vertex clauses") {
  for (const auto& entry : capmapf::testing::small_corpus({1}, 2)) {
    const Instance& inst = entry.instance;
    if (inst.capacities().total() != inst.graph().vertex_count()) continue;
    int lb = cost_lower_bound(inst);
    auto art = encode_complete(inst, lb + 1);
    const CnfFormula& f = art.formula;
    // occupants per (v, t)
    std::map<std::pair<VertexId, int>, int> slots;
    for (const Mdd& m : art.mdds)
      for (int t = 0; t <= art.horizon; ++t)
        for (VertexId v : m.level(t)) ++slots[{v, t}];
    std::size_t expected = 0;
    for (auto [slot, m] : slots) expected += static_cast<std::size_t>(m) * (m - 1) / 2;
    std::size_t found = 0;
    for (std::size_t i = 0; i < f.clause_count(); ++i) {
      auto c = f.clause(i);
      if (c.size() != 2 || !c[0].negated() || !c[1].negated()) continue;
      const auto& k0 = f.key(c[0].var());
      const auto& k1 = f.key(c[1].var());
      if (!k0 || !k1) continue;
      auto* x0 = std::get_if<VertexKey>(&*k0);
      auto* x1 = std::get_if<VertexKey>(&*k1);
      if (x0 && x1 && x0->agent != x1->agent && x0->vertex == x1->vertex && x0->t == x1->t) ++found;
    }
    CAPTURE(entry.name);
    CHECK(found == expected);
    // no counter network over vertex occupancy: only the cost counter may use aux
    std::set<int> networks;
    for (Var v = 1; v <= f.variable_count(); ++v)
      if (const auto& k = f.key(v))
        if (auto* aux = std::get_if<AuxKey>(&*k); aux && aux->tag == "seq")
          networks.insert(aux->index.front());
    CHECK(networks.size() <= 1);
  }
}

TEST_CASE("complete encoding matches the oracle on the small corpus") {
  int checked = 0;
  for (const auto& entry : capmapf::testing::small_corpus({1, 2}, 2)) {
    const Instance& inst = entry.instance;
    int lb = cost_lower_bound(inst);
    OracleResult oracle = brute_force_optimal(inst, 8);
    bool prev_sat = false;
    for (int xi = lb; xi <= lb + 4; ++xi) {
      if (compute_horizon(inst, xi) > 8) break;
      if (oracle.solvable && xi > oracle.cost + 2) break;
      auto art = encode_complete(inst, xi);
      SatResult r = solve(art.formula);
      bool sat = r.outcome == SatOutcome::kSat;
      bool expected = oracle.solvable && oracle.cost <= xi;
      CAPTURE(entry.name);
      CAPTURE(xi);
      CHECK(sat == expected);
      // monotone in the bound
      if (prev_sat) CHECK(sat);
      prev_sat = sat;
      if (sat) {
        Plan plan = extract_plan(art, r.model);
        CHECK(validate_plan(inst, plan).empty());
        CHECK(sum_of_costs(plan) <= xi);
        CHECK(plan.length() == art.horizon + 1);
      }
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("complete models extend to models of the basic encoding") {
  for (const auto& entry : capmapf::testing::small_corpus({1, 2}, 1)) {
    const Instance& inst = entry.instance;
    int lb = cost_lower_bound(inst);
    for (int xi = lb; xi <= lb + 2; ++xi) {
      auto full = encode_complete(inst, xi);
      SatResult r = solve(full.formula);
      if (r.outcome != SatOutcome::kSat) continue;
      auto basic = encode_basic(inst, xi, {});
      Solver s;
      s.add_formula(basic.formula);
      for (Var v = 1; v <= basic.formula.variable_count(); ++v) {
        const auto& key = basic.formula.key(v);
        if (!key || std::holds_alternative<AuxKey>(*key)) continue;
        auto there = full.formula.find(*key);
        REQUIRE(there.has_value());
        s.add_clause({r.value(*there) ? Lit::positive(v) : Lit::negative(v)});
      }
      CAPTURE(entry.name);
      CHECK(s.solve().outcome == SatOutcome::kSat);
    }
  }
}

TEST_CASE("no-follow forbids the rotation on a triangle") {
  Instance inst = make_instance(cycle_graph(3), {1, 1, 1}, {{0, 1}, {1, 2}, {2, 0}});
  auto follow = encode_complete(inst, 3);
  SatResult r = solve(follow.formula);
  REQUIRE(r.outcome == SatOutcome::kSat);
  CHECK(validate_plan(inst, extract_plan(follow, r.model)).empty());
  for (int xi = 3; xi <= 6; ++xi) {
    auto strict = encode_complete(inst, xi, {MoveRule::kNoFollow});
    CHECK(solve(strict.formula).outcome == SatOutcome::kUnsat);
  }
  // a spare slot makes it possible again
  Instance roomy = inst.with_capacities(CapacityMap({2, 1, 1}));
  auto strict = encode_complete(roomy, 6, {MoveRule::kNoFollow});
  SatResult rr = solve(strict.formula);
  REQUIRE(rr.outcome == SatOutcome::kSat);
  CHECK(validate_plan(roomy, extract_plan(strict, rr.model), MoveRule::kNoFollow).empty());
}

TEST_CASE("no-follow encoding matches the oracle") {
  for (const auto& entry : capmapf::testing::small_corpus({1, 2}, 1)) {
    const Instance& inst = entry.instance;
    int lb = cost_lower_bound(inst);
    OracleResult oracle = brute_force_optimal(inst, 8, MoveRule::kNoFollow);
    for (int xi = lb; xi <= lb + 3; ++xi) {
      if (compute_horizon(inst, xi) > 8) break;
      auto art = encode_complete(inst, xi, {MoveRule::kNoFollow});
      SatResult r = solve(art.formula);
      CAPTURE(entry.name);
      CAPTURE(xi);
      CHECK((r.outcome == SatOutcome::kSat) == (oracle.solvable && oracle.cost <= xi));
      if (r.outcome == SatOutcome::kSat)
        CHECK(validate_plan(inst, extract_plan(art, r.model), MoveRule::kNoFollow).empty());
    }
  }
}
