#include <doctest.h>

#include <bit>
#include <sstream>

#include "capmapf/cnf.hpp"
#include "support/oracles.hpp"

using namespace capmapf;
using capmapf::testing::Dpll;

namespace {

std::vector<Lit> fresh(CnfFormula& f, int n) {
  std::vector<Lit> out;
  for (int i = 0; i < n; ++i) out.push_back(Lit::positive(f.new_var()));
  return out;
}

// Which assignments of the first n variables extend to a model.
std::vector<bool> projection(const CnfFormula& f, int n, std::vector<int> extra_fixed = {}) {
  Dpll dpll(capmapf::testing::clauses_of(f), f.variable_count());
  std::vector<bool> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> fixed(f.variable_count() + 1, 0);
    for (int i = 0; i < n; ++i) fixed[i + 1] = (mask >> i) & 1 ? 1 : -1;
    for (int l : extra_fixed) fixed[l > 0 ? l : -l] = l > 0 ? 1 : -1;
    out.push_back(dpll.satisfiable(fixed));
  }
  return out;
}

}  // namespace

TEST_CASE("allocate is idempotent and keyed") {
  CnfFormula f;
  Var a = f.allocate(VertexKey{1, 4, 3});
  CHECK(f.allocate(VertexKey{1, 4, 3}) == a);
  Var b = f.allocate(VertexKey{1, 4, 2});
  Var c = f.allocate(EdgeKey{1, 4, 4, 2});
  Var d = f.allocate(AuxKey{"settled", {1, 2}});
  CHECK(a != b);
  CHECK(c != b);
  CHECK(d != c);
  for (Var v : {a, b, c, d}) CHECK(f.find(*f.key(v)) == v);
  CHECK_FALSE(f.find(VertexKey{0, 0, 0}).has_value());
  Var plain = f.new_var();
  CHECK_FALSE(f.key(plain).has_value());
}

TEST_CASE("add_clause contract") {
  CnfFormula f;
  Var a = f.new_var();
  CHECK_THROWS_AS(f.add_clause({}), std::invalid_argument);
  CHECK_THROWS_AS(f.add_clause({Lit::positive(a + 1)}), std::invalid_argument);
  f.add_clause({Lit::negative(a)});
  CHECK(f.clause_count() == 1);
}

TEST_CASE("pairwise at-most-one") {
  for (int n : {1, 3, 4}) {
    CnfFormula f;
    auto lits = fresh(f, n);
    at_most_one_pairwise(f, lits);
    CHECK(f.clause_count() == static_cast<std::size_t>(n * (n - 1) / 2));
    if (n == 4) {
      auto proj = projection(f, 4);
      CHECK(std::count(proj.begin(), proj.end(), true) == 5);
    }
  }
}

TEST_CASE("at_most_k small cases") {
  SUBCASE("n=3 k=2 forbids only all-true") {
    CnfFormula f;
    auto lits = fresh(f, 3);
    at_most_k(f, lits, 2);
    auto proj = projection(f, 3);
    CHECK(std::count(proj.begin(), proj.end(), true) == 7);
    CHECK_FALSE(proj[7]);
  }
  SUBCASE("k >= n is vacuous") {
    CnfFormula f;
    auto lits = fresh(f, 5);
    at_most_k(f, lits, 5);
    CHECK(f.clause_count() == 0);
  }
  SUBCASE("k = 0 gives units") {
    CnfFormula f;
    auto lits = fresh(f, 2);
    at_most_k(f, lits, 0);
    REQUIRE(f.clause_count() == 2);
    CHECK(f.clause(0).size() == 1);
    CHECK(f.clause(1).size() == 1);
  }
  SUBCASE("negative k is a contract violation") {
    CnfFormula f;
    auto lits = fresh(f, 2);
    CHECK_THROWS_AS(at_most_k(f, lits, -1), std::invalid_argument);
  }
}

TEST_CASE("at_most_k projects onto the <=k sets for n <= 8") {
  for (int n = 0; n <= 8; ++n) {
    for (int k = 0; k <= n; ++k) {
      CnfFormula f;
      auto lits = fresh(f, n);
      at_most_k(f, lits, k);
      auto proj = projection(f, n);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(mask);
        CHECK(proj[mask] == (std::popcount(mask) <= k));
      }
    }
  }
}

TEST_CASE("guarded at_most_k only binds when the guard holds") {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k < n; ++k) {
      CnfFormula f;
      auto lits = fresh(f, n);
      Var guard = f.new_var();
      at_most_k(f, lits, k, Lit::positive(guard));
      auto on = projection(f, n, {static_cast<int>(guard)});
      auto off = projection(f, n, {-static_cast<int>(guard)});
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        CHECK(on[mask] == (std::popcount(mask) <= k));
        CHECK(off[mask]);
      }
    }
  }
}

TEST_CASE("several counters in one formula do not share auxiliaries") {
  CnfFormula f;
  auto a = fresh(f, 4);
  auto b = fresh(f, 4);
  at_most_k(f, a, 2);
  at_most_k(f, b, 2);
  Dpll dpll(capmapf::testing::clauses_of(f), f.variable_count());
  std::vector<int> fixed(f.variable_count() + 1, 0);
  for (int i = 1; i <= 8; ++i) fixed[i] = (i == 1 || i == 2 || i == 5 || i == 6) ? 1 : -1;
  CHECK(dpll.satisfiable(fixed));
  fixed[3] = 1;
  CHECK_FALSE(dpll.satisfiable(fixed));
}

TEST_CASE("dimacs writer") {
  CHECK(to_dimacs(CnfFormula{}) == "p cnf 0 0\n");
  CnfFormula f;
  Var x = f.new_var();
  f.add_clause({Lit::positive(x)});
  CHECK(to_dimacs(f) == "p cnf 1 1\n1 0\n");
}

TEST_CASE("dimacs round trip keeps keys") {
  CnfFormula f;
  Var a = f.allocate(VertexKey{0, 2, 1});
  Var b = f.allocate(EdgeKey{1, 2, 3, 0});
  Var c = f.allocate(AuxKey{"seq", {0, 1, 2}});
  f.new_var();
  f.add_clause({Lit::positive(a), Lit::negative(b)});
  f.add_clause({Lit::negative(c)});
  std::string text = to_dimacs(f);
  std::istringstream in(text);
  CnfFormula back = parse_dimacs(in);
  CHECK(back == f);
  CHECK(to_dimacs(back) == text);
}

TEST_CASE("dimacs parser accepts plain files and rejects junk") {
  std::istringstream plain("c hello\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n");
  CnfFormula f = parse_dimacs(plain);
  CHECK(f.variable_count() == 3);
  CHECK(f.clause_count() == 2);
  CHECK(f.clause(1).size() == 3);
  std::istringstream bad("p cnf 2 1\n1 x 0\n");
  CHECK_THROWS(parse_dimacs(bad));
  std::istringstream range("p cnf 2 1\n3 0\n");
  CHECK_THROWS(parse_dimacs(range));
}
