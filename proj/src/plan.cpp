#include "capmapf/plan.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "capmapf/error.hpp"
#include "capmapf/verify.hpp"

namespace capmapf {

bool Plan::ragged() const {
  return std::any_of(paths_.begin(), paths_.end(),
                     [&](const auto& p) { return p.size() != paths_.front().size(); });
}

Plan Plan::trimmed() const {
  if (paths_.empty() || ragged()) return *this;
  std::size_t keep = 1;
  for (const auto& p : paths_)
    for (std::size_t t = p.size(); t-- > 1;)
      if (p[t] != p[t - 1]) {
        keep = std::max(keep, t + 1);
        break;
      }
  std::vector<std::vector<VertexId>> cut;
  for (const auto& p : paths_) cut.emplace_back(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(keep));
  return Plan(std::move(cut));
}

void write_plan(std::ostream& out, const Plan& plan) {
  for (int t = 0; t < plan.length(); ++t) {
    out << t << ':';
    for (const auto& p : plan.paths()) out << ' ' << p[t];
    out << '\n';
  }
  out << "cost=" << sum_of_costs(plan) << " makespan=" << makespan(plan) << '\n';
}

std::string format_plan(const Plan& plan) {
  std::ostringstream out;
  write_plan(out, plan);
  return out.str();
}

Plan parse_plan(std::istream& in) {
  std::vector<std::vector<VertexId>> steps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.rfind("cost=", 0) == 0) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 't: v v ...'", line_no);
    int t = 0;
    try {
      t = std::stoi(line.substr(0, colon));
    } catch (const std::exception&) {
      throw ParseError("bad time step", line_no);
    }
    if (t != static_cast<int>(steps.size()))
      throw ParseError("expected time step " + std::to_string(steps.size()), line_no);
    std::istringstream fields(line.substr(colon + 1));
    std::vector<VertexId> config;
    for (long long v; fields >> v;) config.push_back(static_cast<VertexId>(v));
    if (!fields.eof()) throw ParseError("bad vertex id", line_no);
    if (!steps.empty() && config.size() != steps.front().size())
      throw ParseError("configuration size differs from the first step", line_no);
    steps.push_back(std::move(config));
  }
  if (steps.empty()) return Plan();
  std::vector<std::vector<VertexId>> paths(steps.front().size());
  for (const auto& config : steps)
    for (std::size_t a = 0; a < config.size(); ++a) paths[a].push_back(config[a]);
  return Plan(std::move(paths));
}

Conflict Conflict::capacity(std::vector<AgentId> occupants, VertexId v, int t) {
  std::sort(occupants.begin(), occupants.end());
  return Conflict{ConflictKind::kCapacity, t, std::move(occupants), v, -1};
}

Conflict Conflict::swap(AgentId a, AgentId b, VertexId a_from, VertexId a_to, int t) {
  return Conflict{ConflictKind::kSwap, t, {a, b}, a_to, a_from};
}

Conflict Conflict::occupied_target(AgentId mover, VertexId from, VertexId to,
                                   std::vector<AgentId> occupants, int t) {
  std::sort(occupants.begin(), occupants.end());
  std::vector<AgentId> agents{mover};
  agents.insert(agents.end(), occupants.begin(), occupants.end());
  return Conflict{ConflictKind::kOccupiedTarget, t, std::move(agents), to, from};
}

std::string Conflict::describe() const {
  std::ostringstream out;
  auto list = [&](std::size_t first) {
    for (std::size_t i = first; i < agents.size(); ++i) out << (i > first ? "," : "") << agents[i];
  };
  switch (kind) {
    case ConflictKind::kCapacity:
      out << "capacity {";
      list(0);
      out << "} at vertex " << vertex << " t=" << t;
      break;
    case ConflictKind::kSwap:
      out << "swap {" << agents[0] << "," << agents[1] << "} on edge {" << from << "," << vertex
          << "} t=" << t;
      break;
    case ConflictKind::kOccupiedTarget:
      out << "agent " << agents[0] << " enters occupied vertex " << vertex << " from " << from
          << " (occupants {";
      list(1);
      out << "}) t=" << t;
      break;
  }
  return out.str();
}

}  // namespace capmapf
