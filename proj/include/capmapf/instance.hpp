#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace capmapf {

using VertexId = std::int32_t;
using AgentId = std::int32_t;

// Whether a moving agent may enter a vertex that is being vacated in the same
// step. kAllowFollow is the standard rule; kNoFollow additionally requires the
// target to have spare capacity at the time the move starts.
enum class MoveRule { kAllowFollow, kNoFollow };

// Layout of a graph that came from a grid map. Cells are row-major.
struct GridInfo {
  std::string type = "octile";
  int width = 0;
  int height = 0;
  std::vector<char> cells;           // raw map characters
  std::vector<VertexId> vertex_at;   // cell -> vertex, -1 when blocked
  std::vector<int> cell_of;          // vertex -> cell

  std::optional<VertexId> vertex(int x, int y) const;
  std::pair<int, int> coordinates(VertexId v) const;
};

// Undirected simple graph with dense vertex ids and sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  // Throws ValidationError on self-loops or out-of-range ids. Duplicate edges
  // are merged.
  static Graph from_edges(int vertex_count,
                          std::span<const std::pair<VertexId, VertexId>> edges);
  static Graph from_grid(GridInfo grid);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
  bool adjacent(VertexId u, VertexId v) const;
  bool valid(VertexId v) const { return v >= 0 && v < vertex_count(); }
  const std::optional<GridInfo>& grid() const { return grid_; }

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edge_count_ = 0;
  std::optional<GridInfo> grid_;
};

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int leaves);  // vertex 0 is the hub
Graph open_grid(int width, int height);

class CapacityMap {
 public:
  CapacityMap() = default;
  explicit CapacityMap(std::vector<int> values);  // all values must be >= 1
  static CapacityMap uniform(int vertex_count, int capacity);

  int operator[](VertexId v) const { return values_[v]; }
  int size() const { return static_cast<int>(values_.size()); }
  long long total() const;
  const std::vector<int>& values() const { return values_; }

 private:
  std::vector<int> values_;
};

struct UniformCapacity {
  int capacity = 1;
};

struct PerVertexCapacity {
  std::vector<std::pair<VertexId, int>> entries;  // unlisted vertices get 1
};

using CapacitySpec = std::variant<UniformCapacity, PerVertexCapacity>;

// Plain text `vertex_id capacity` pairs; `#` starts a comment.
PerVertexCapacity parse_capacity_file(std::istream& in);
CapacityMap load_capacities(const CapacitySpec& spec, const Graph& graph);

struct Agent {
  AgentId id = 0;
  VertexId start = 0;
  VertexId goal = 0;

  friend bool operator==(const Agent&, const Agent&) = default;
};

// A capacitated MAPF instance. The constructor validates every invariant, so a
// constructed Instance is always well formed.
class Instance {
 public:
  Instance(Graph graph, CapacityMap capacities, std::vector<Agent> agents);

  const Graph& graph() const { return graph_; }
  const CapacityMap& capacities() const { return capacities_; }
  const std::vector<Agent>& agents() const { return agents_; }
  int agent_count() const { return static_cast<int>(agents_.size()); }
  const Agent& agent(AgentId a) const { return agents_[a]; }

  Instance with_capacities(CapacityMap capacities) const;

 private:
  Graph graph_;
  CapacityMap capacities_;
  std::vector<Agent> agents_;
};

// Throws ValidationError describing the first broken invariant.
void validate_instance(const Graph& graph, const CapacityMap& capacities,
                       std::span<const Agent> agents);
inline void validate_instance(const Instance& instance) {
  validate_instance(instance.graph(), instance.capacities(), instance.agents());
}

// movingai .map format.
Graph parse_map(std::istream& in);
Graph parse_map_file(const std::string& path);
std::string serialize_map(const Graph& graph);

// movingai .scen format. Requires a graph built from a map.
std::vector<Agent> parse_scenario(std::istream& in, const Graph& graph);
std::vector<Agent> parse_scenario_file(const std::string& path, const Graph& graph);

// Draws k capacity-respecting start and goal placements. Pure function of its
// arguments.
std::vector<Agent> random_agents(const Graph& graph, const CapacityMap& capacities,
                                 int k, std::uint64_t seed);

Instance generate_random(int width, int height, int k, int capacity, std::uint64_t seed);

}  // namespace capmapf
