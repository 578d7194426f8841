#include "capmapf/encoder.hpp"

#include <stdexcept>

#include "capmapf/error.hpp"
#include "capmapf/pathcalc.hpp"

namespace capmapf {

namespace {

Lit x_lit(CnfFormula& f, AgentId a, VertexId v, int t) {
  return Lit::positive(f.allocate(VertexKey{a, v, t}));
}

Lit e_lit(CnfFormula& f, AgentId a, VertexId from, VertexId to, int t) {
  return Lit::positive(f.allocate(EdgeKey{a, from, to, t}));
}

std::optional<Lit> find_x(const CnfFormula& f, AgentId a, VertexId v, int t) {
  auto var = f.find(VertexKey{a, v, t});
  if (!var) return std::nullopt;
  return Lit::positive(*var);
}

std::optional<Lit> find_e(const CnfFormula& f, AgentId a, VertexId from, VertexId to, int t) {
  auto var = f.find(EdgeKey{a, from, to, t});
  if (!var) return std::nullopt;
  return Lit::positive(*var);
}

// Groups shared by both models: endpoints, path structure, sum-of-costs bound.
EncodingArtifacts encode_paths(const Instance& instance, int xi, EncodingMode mode) {
  EncodingArtifacts art;
  art.mode = mode;
  art.xi = xi;
  art.agent_bounds = agent_lower_bounds(instance);
  for (int b : art.agent_bounds) art.lower_bound += b;
  art.horizon = compute_horizon(art.agent_bounds, xi);
  art.delta = xi - art.lower_bound;

  try {
    for (AgentId a = 0; a < instance.agent_count(); ++a)
      art.mdds.push_back(build_mdd(instance, a, art.horizon));
  } catch (const EmptyMddError&) {
    art.empty_mdd = true;
    art.mdds.clear();
    return art;
  }

  CnfFormula& f = art.formula;
  const int mu = art.horizon;

  // Variables in a fixed order: per agent, level by level, X then E.
  for (const Mdd& mdd : art.mdds) {
    for (int t = 0; t <= mu; ++t) {
      for (VertexId v : mdd.level(t)) x_lit(f, mdd.agent(), v, t);
      if (t < mu)
        for (const MddArc& arc : mdd.arcs(t)) e_lit(f, mdd.agent(), arc.from, arc.to, t);
    }
  }

  std::vector<Lit> clause;
  std::vector<std::vector<Lit>> incoming;
  for (const Mdd& mdd : art.mdds) {
    const AgentId a = mdd.agent();
    const Agent& agent = instance.agent(a);
    f.add_clause({x_lit(f, a, agent.start, 0)});
    f.add_clause({x_lit(f, a, agent.goal, mu)});

    for (int t = 0; t < mu; ++t) {
      // leave every occupied vertex through exactly one arc
      for (VertexId u : mdd.level(t)) {
        auto out = mdd.outgoing(t, u);
        clause.assign(1, ~x_lit(f, a, u, t));
        std::vector<Lit> arcs;
        for (const MddArc& arc : out) arcs.push_back(e_lit(f, a, arc.from, arc.to, t));
        clause.insert(clause.end(), arcs.begin(), arcs.end());
        f.add_clause(clause);
        at_most_k(f, arcs, 1);
      }
      // an arc needs its tail now and its head next step
      for (const MddArc& arc : mdd.arcs(t)) {
        Lit e = e_lit(f, a, arc.from, arc.to, t);
        f.add_clause({~e, x_lit(f, a, arc.from, t)});
        f.add_clause({~e, x_lit(f, a, arc.to, t + 1)});
      }
      // every occupied vertex was entered through some arc
      incoming.assign(instance.graph().vertex_count(), {});
      for (const MddArc& arc : mdd.arcs(t))
        incoming[arc.to].push_back(e_lit(f, a, arc.from, arc.to, t));
      for (VertexId v : mdd.level(t + 1)) {
        clause.assign(1, ~x_lit(f, a, v, t + 1));
        clause.insert(clause.end(), incoming[v].begin(), incoming[v].end());
        f.add_clause(clause);
      }
    }
  }

  // settled[a][t]: agent a stays at its goal from t on. Each unsettled step
  // beyond the agent's shortest distance costs one unit of slack.
  std::vector<Lit> unsettled;
  for (const Mdd& mdd : art.mdds) {
    const AgentId a = mdd.agent();
    const VertexId goal = instance.agent(a).goal;
    const int first = art.agent_bounds[a];
    for (int t = first; t <= mu; ++t) {
      Lit s = Lit::positive(f.allocate(AuxKey{"settled", {a, t}}));
      f.add_clause({~s, x_lit(f, a, goal, t)});
      if (t < mu) {
        Lit next = Lit::positive(f.allocate(AuxKey{"settled", {a, t + 1}}));
        f.add_clause({~s, next});
        unsettled.push_back(~s);
      } else {
        f.add_clause({s});
      }
    }
  }
  at_most_k(f, unsettled, art.delta);
  return art;
}

void add_inter_agent_constraints(const Instance& instance, EncodingArtifacts& art,
                                 MoveRule rule) {
  CnfFormula& f = art.formula;
  const int mu = art.horizon;
  const int k = instance.agent_count();
  const int n = instance.graph().vertex_count();

  // no two agents traverse an edge in opposite directions
  for (AgentId i = 0; i < k; ++i) {
    for (AgentId j = i + 1; j < k; ++j) {
      for (int t = 0; t < mu; ++t) {
        for (const MddArc& arc : art.mdds[i].arcs(t)) {
          if (arc.from == arc.to || !art.mdds[j].has_arc(t, arc.to, arc.from)) continue;
          f.add_clause({~e_lit(f, i, arc.from, arc.to, t), ~e_lit(f, j, arc.to, arc.from, t)});
        }
      }
    }
  }

  // vertex capacities at every time step
  std::vector<std::vector<Lit>> occupants(n);
  for (int t = 0; t <= mu; ++t) {
    for (auto& list : occupants) list.clear();
    for (const Mdd& mdd : art.mdds)
      for (VertexId v : mdd.level(t)) occupants[v].push_back(x_lit(f, mdd.agent(), v, t));
    for (VertexId v = 0; v < n; ++v) {
      const int cap = instance.capacities()[v];
      if (cap == 1)
        at_most_one_pairwise(f, occupants[v]);
      else
        at_most_k(f, occupants[v], cap);
    }
  }

  if (rule != MoveRule::kNoFollow) return;
  // a move may only target a vertex that has spare room before the step
  std::vector<Lit> others;
  for (const Mdd& mdd : art.mdds) {
    const AgentId i = mdd.agent();
    for (int t = 0; t < mu; ++t) {
      for (const MddArc& arc : mdd.arcs(t)) {
        if (arc.from == arc.to) continue;
        others.clear();
        for (AgentId j = 0; j < k; ++j)
          if (j != i && art.mdds[j].contains(t, arc.to)) others.push_back(x_lit(f, j, arc.to, t));
        at_most_k(f, others, instance.capacities()[arc.to] - 1, e_lit(f, i, arc.from, arc.to, t));
      }
    }
  }
}

}  // namespace

EncodingArtifacts encode_complete(const Instance& instance, int xi, const EncodeOptions& options) {
  EncodingArtifacts art = encode_paths(instance, xi, EncodingMode::kComplete);
  if (!art.empty_mdd) add_inter_agent_constraints(instance, art, options.rule);
  return art;
}

EncodingArtifacts encode_basic(const Instance& instance, int xi,
                               std::span<const Conflict> conflicts, const EncodeOptions&) {
  EncodingArtifacts art = encode_paths(instance, xi, EncodingMode::kBasic);
  if (art.empty_mdd) return art;
  for (const Conflict& c : conflicts) {
    if (auto clause = conflict_clause(art, c)) {
      art.formula.add_clause(*clause);
      ++art.conflict_clauses;
    }
  }
  return art;
}

std::optional<std::vector<Lit>> conflict_clause(const EncodingArtifacts& art,
                                                const Conflict& c) {
  const CnfFormula& f = art.formula;
  std::vector<Lit> clause;
  auto push = [&](std::optional<Lit> l) {
    if (!l) return false;
    clause.push_back(~*l);
    return true;
  };
  switch (c.kind) {
    case ConflictKind::kCapacity:
      for (AgentId a : c.agents)
        if (!push(find_x(f, a, c.vertex, c.t))) return std::nullopt;
      break;
    case ConflictKind::kSwap:
      if (!push(find_e(f, c.agents[0], c.from, c.vertex, c.t)) ||
          !push(find_e(f, c.agents[1], c.vertex, c.from, c.t)))
        return std::nullopt;
      break;
    case ConflictKind::kOccupiedTarget:
      if (!push(find_e(f, c.agents[0], c.from, c.vertex, c.t))) return std::nullopt;
      for (std::size_t i = 1; i < c.agents.size(); ++i)
        if (!push(find_x(f, c.agents[i], c.vertex, c.t))) return std::nullopt;
      break;
  }
  return clause;
}

Plan extract_plan(const EncodingArtifacts& art, const std::vector<bool>& model) {
  if (art.empty_mdd) throw std::logic_error("no formula to decode");
  std::vector<std::vector<VertexId>> paths;
  for (const Mdd& mdd : art.mdds) {
    std::vector<VertexId> path;
    for (int t = 0; t <= art.horizon; ++t) {
      int found = 0;
      for (VertexId v : mdd.level(t)) {
        auto var = art.formula.find(VertexKey{mdd.agent(), v, t});
        if (var && model.at(*var)) {
          if (found++ == 0) path.push_back(v);
        }
      }
      if (found != 1)
        throw std::logic_error("agent " + std::to_string(mdd.agent()) + " occupies " +
                               std::to_string(found) + " vertices at t=" + std::to_string(t));
    }
    paths.push_back(std::move(path));
  }
  return Plan(std::move(paths));
}

}  // namespace capmapf
