#pragma once

#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "capmapf/instance.hpp"
#include "capmapf/literal.hpp"

namespace capmapf {

// X: agent occupies vertex at time t.
struct VertexKey {
  AgentId agent;
  VertexId vertex;
  int t;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
};

// E: agent traverses from -> to between t and t+1 (from == to is a wait).
struct EdgeKey {
  AgentId agent;
  VertexId from;
  VertexId to;
  int t;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

// Auxiliaries: counters, settled indicators. The tag must not contain spaces.
struct AuxKey {
  std::string tag;
  std::vector<int> index;
  friend bool operator==(const AuxKey&, const AuxKey&) = default;
};

using VarKey = std::variant<VertexKey, EdgeKey, AuxKey>;

struct VarKeyHash {
  std::size_t operator()(const VarKey& key) const;
};

// Single-owner builder: variable allocator keyed by meaning plus a flat clause
// store.
class CnfFormula {
 public:
  // Returns the existing variable when the key was allocated before.
  Var allocate(const VarKey& key);
  // A variable without a key (e.g. read from a plain DIMACS file).
  Var new_var();
  std::optional<Var> find(const VarKey& key) const;
  const std::optional<VarKey>& key(Var v) const { return keys_[v - 1]; }

  // Throws std::invalid_argument on an empty clause or an unallocated variable.
  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  int variable_count() const { return static_cast<int>(keys_.size()); }
  std::size_t clause_count() const { return starts_.size(); }
  std::span<const Lit> clause(std::size_t i) const;
  std::size_t literal_count() const { return literals_.size(); }

  // Distinct id for each cardinality network built into this formula.
  int next_network_id() { return networks_++; }

  friend bool operator==(const CnfFormula& a, const CnfFormula& b);

 private:
  std::vector<std::optional<VarKey>> keys_;
  std::unordered_map<VarKey, Var, VarKeyHash> index_;
  std::vector<Lit> literals_;
  std::vector<std::size_t> starts_;
  int networks_ = 0;
};

// Every pair gets a binary clause. With a guard, the constraint only applies
// when the guard literal is true.
void at_most_one_pairwise(CnfFormula& formula, std::span<const Lit> lits,
                          std::optional<Lit> guard = std::nullopt);

// Sequential counter for "at most k of lits are true". k >= n emits nothing,
// k == 0 emits unit negations, k == 1 with n <= 6 falls back to pairwise.
void at_most_k(CnfFormula& formula, std::span<const Lit> lits, int k,
               std::optional<Lit> guard = std::nullopt);

// DIMACS with the key map in leading comment lines:
//   c x <var> <agent> <vertex> <t>
//   c e <var> <agent> <from> <to> <t>
//   c a <var> <tag> <index...>
void write_dimacs(std::ostream& out, const CnfFormula& formula);
std::string to_dimacs(const CnfFormula& formula);
CnfFormula parse_dimacs(std::istream& in);

}  // namespace capmapf
