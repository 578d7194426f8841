#include "capmapf/cnf.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "capmapf/error.hpp"

namespace capmapf {

namespace {

void mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

std::size_t VarKeyHash::operator()(const VarKey& key) const {
  std::size_t seed = key.index();
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, VertexKey>) {
          mix(seed, k.agent);
          mix(seed, k.vertex);
          mix(seed, k.t);
        } else if constexpr (std::is_same_v<K, EdgeKey>) {
          mix(seed, k.agent);
          mix(seed, k.from);
          mix(seed, k.to);
          mix(seed, k.t);
        } else {
          mix(seed, std::hash<std::string>{}(k.tag));
          for (int i : k.index) mix(seed, i);
        }
      },
      key);
  return seed;
}

Var CnfFormula::allocate(const VarKey& key) {
  auto [it, inserted] = index_.try_emplace(key, variable_count() + 1);
  if (inserted) keys_.emplace_back(key);
  return it->second;
}

Var CnfFormula::new_var() {
  keys_.emplace_back(std::nullopt);
  return variable_count();
}

std::optional<Var> CnfFormula::find(const VarKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void CnfFormula::add_clause(std::span<const Lit> lits) {
  if (lits.empty()) throw std::invalid_argument("empty clause");
  for (Lit l : lits)
    if (l.var() < 1 || l.var() > variable_count())
      throw std::invalid_argument("clause references unallocated variable " +
                                  std::to_string(l.dimacs()));
  starts_.push_back(literals_.size());
  literals_.insert(literals_.end(), lits.begin(), lits.end());
}

std::span<const Lit> CnfFormula::clause(std::size_t i) const {
  std::size_t begin = starts_[i];
  std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : literals_.size();
  return {literals_.data() + begin, end - begin};
}

bool operator==(const CnfFormula& a, const CnfFormula& b) {
  return a.keys_ == b.keys_ && a.literals_ == b.literals_ && a.starts_ == b.starts_;
}

void at_most_one_pairwise(CnfFormula& formula, std::span<const Lit> lits,
                          std::optional<Lit> guard) {
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (guard)
        formula.add_clause({~*guard, ~lits[i], ~lits[j]});
      else
        formula.add_clause({~lits[i], ~lits[j]});
    }
  }
}

void at_most_k(CnfFormula& formula, std::span<const Lit> lits, int k, std::optional<Lit> guard) {
  const int n = static_cast<int>(lits.size());
  if (k < 0) throw std::invalid_argument("negative cardinality bound");
  if (k >= n) return;
  if (k == 0) {
    for (Lit x : lits) {
      if (guard)
        formula.add_clause({~*guard, ~x});
      else
        formula.add_clause({~x});
    }
    return;
  }
  if (k == 1 && n <= 6) {
    at_most_one_pairwise(formula, lits, guard);
    return;
  }

  // count[i][j] (1-based j) means at least j of lits[0..i] are true.
  const int id = formula.next_network_id();
  std::vector<std::vector<Var>> count(n - 1, std::vector<Var>(k + 1, 0));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 1; j <= k; ++j) count[i][j] = formula.allocate(AuxKey{"seq", {id, i, j}});
  auto s = [&](int i, int j) { return Lit::positive(count[i][j]); };
  auto overflow = [&](Lit x, Lit full) {
    if (guard)
      formula.add_clause({~*guard, ~x, ~full});
    else
      formula.add_clause({~x, ~full});
  };

  formula.add_clause({~lits[0], s(0, 1)});
  for (int j = 2; j <= k; ++j) formula.add_clause({~s(0, j)});
  for (int i = 1; i < n - 1; ++i) {
    formula.add_clause({~lits[i], s(i, 1)});
    formula.add_clause({~s(i - 1, 1), s(i, 1)});
    for (int j = 2; j <= k; ++j) {
      formula.add_clause({~lits[i], ~s(i - 1, j - 1), s(i, j)});
      formula.add_clause({~s(i - 1, j), s(i, j)});
    }
    overflow(lits[i], s(i - 1, k));
  }
  overflow(lits[n - 1], s(n - 2, k));
}

void write_dimacs(std::ostream& out, const CnfFormula& formula) {
  for (Var v = 1; v <= formula.variable_count(); ++v) {
    const auto& key = formula.key(v);
    if (!key) continue;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, VertexKey>) {
            out << "c x " << v << ' ' << k.agent << ' ' << k.vertex << ' ' << k.t << '\n';
          } else if constexpr (std::is_same_v<K, EdgeKey>) {
            out << "c e " << v << ' ' << k.agent << ' ' << k.from << ' ' << k.to << ' ' << k.t
                << '\n';
          } else {
            out << "c a " << v << ' ' << k.tag;
            for (int i : k.index) out << ' ' << i;
            out << '\n';
          }
        },
        *key);
  }
  out << "p cnf " << formula.variable_count() << ' ' << formula.clause_count() << '\n';
  for (std::size_t i = 0; i < formula.clause_count(); ++i) {
    for (Lit l : formula.clause(i)) out << l.dimacs() << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  write_dimacs(out, formula);
  return out.str();
}

CnfFormula parse_dimacs(std::istream& in) {
  std::map<Var, VarKey> keys;
  std::string line;
  int line_no = 0;
  long long declared_vars = -1;
  long long declared_clauses = -1;

  auto read_ints = [&](std::istringstream& fields, std::vector<int>& out) {
    for (long long x; fields >> x;) out.push_back(static_cast<int>(x));
    if (!fields.eof()) throw ParseError("malformed key comment", line_no);
  };

  while (declared_vars < 0 && std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "c") {
      std::string kind;
      fields >> kind;
      std::vector<int> nums;
      if (kind == "x" || kind == "e") {
        read_ints(fields, nums);
        if (kind == "x" && nums.size() == 4)
          keys[nums[0]] = VertexKey{nums[1], nums[2], nums[3]};
        else if (kind == "e" && nums.size() == 5)
          keys[nums[0]] = EdgeKey{nums[1], nums[2], nums[3], nums[4]};
        else
          throw ParseError("malformed key comment", line_no);
      } else if (kind == "a") {
        long long var = 0;
        std::string tag;
        if (!(fields >> var >> tag)) throw ParseError("malformed key comment", line_no);
        read_ints(fields, nums);
        keys[static_cast<Var>(var)] = AuxKey{tag, nums};
      }
      continue;
    }
    std::string format;
    if (head != "p" || !(fields >> format >> declared_vars >> declared_clauses) ||
        format != "cnf" || declared_vars < 0 || declared_clauses < 0)
      throw ParseError("expected 'p cnf <vars> <clauses>'", line_no);
  }
  if (declared_vars < 0) throw ParseError("missing 'p cnf' header", line_no);

  CnfFormula formula;
  for (Var v = 1; v <= declared_vars; ++v) {
    auto it = keys.find(v);
    Var got = it != keys.end() ? formula.allocate(it->second) : formula.new_var();
    if (got != v) throw ParseError("duplicate key for variable " + std::to_string(v), 0);
  }
  if (!keys.empty() && keys.rbegin()->first > declared_vars)
    throw ParseError("key comment for undeclared variable", 0);

  std::vector<Lit> clause;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "c" || first == "%") continue;
    std::istringstream all(line);
    for (long long x; all >> x;) {
      if (x == 0) {
        if (clause.empty()) throw ParseError("empty clause", line_no);
        formula.add_clause(clause);
        clause.clear();
      } else {
        if (x > declared_vars || -x > declared_vars)
          throw ParseError("literal " + std::to_string(x) + " exceeds declared variables", line_no);
        clause.push_back(Lit::from_dimacs(static_cast<std::int32_t>(x)));
      }
    }
    if (!all.eof()) throw ParseError("unexpected token in clause", line_no);
  }
  if (!clause.empty()) formula.add_clause(clause);
  if (static_cast<long long>(formula.clause_count()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(formula.clause_count()),
                     line_no);
  return formula;
}

}  // namespace capmapf
