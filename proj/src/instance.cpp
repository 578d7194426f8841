#include "capmapf/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

#include "capmapf/error.hpp"

namespace capmapf {

namespace {

bool passable_cell(char c) { return c == '.' || c == 'G'; }
bool blocked_cell(char c) { return c == '@' || c == 'O' || c == 'T' || c == 'W'; }

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int parse_positive(const std::string& text, const char* what, int line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + text + "'", line);
  }
  if (used != text.size() || value <= 0)
    throw ParseError(std::string("invalid ") + what + " '" + text + "'", line);
  return value;
}

}  // namespace

std::optional<VertexId> GridInfo::vertex(int x, int y) const {
  if (x < 0 || y < 0 || x >= width || y >= height) return std::nullopt;
  VertexId v = vertex_at[static_cast<std::size_t>(y) * width + x];
  if (v < 0) return std::nullopt;
  return v;
}

std::pair<int, int> GridInfo::coordinates(VertexId v) const {
  int cell = cell_of[v];
  return {cell % width, cell / width};
}

Graph Graph::from_edges(int vertex_count,
                        std::span<const std::pair<VertexId, VertexId>> edges) {
  if (vertex_count < 0) throw ValidationError("negative vertex count");
  Graph g;
  g.adjacency_.resize(vertex_count);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw ValidationError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                            "} references a missing vertex");
    if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.edge_count_ += list.size();
  }
  g.edge_count_ /= 2;
  return g;
}

Graph Graph::from_grid(GridInfo grid) {
  const int w = grid.width;
  const int h = grid.height;
  grid.vertex_at.assign(static_cast<std::size_t>(w) * h, -1);
  grid.cell_of.clear();
  for (int cell = 0; cell < w * h; ++cell) {
    if (passable_cell(grid.cells[cell])) {
      grid.vertex_at[cell] = static_cast<VertexId>(grid.cell_of.size());
      grid.cell_of.push_back(cell);
    }
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      VertexId v = grid.vertex_at[y * w + x];
      if (v < 0) continue;
      if (x + 1 < w && grid.vertex_at[y * w + x + 1] >= 0)
        edges.emplace_back(v, grid.vertex_at[y * w + x + 1]);
      if (y + 1 < h && grid.vertex_at[(y + 1) * w + x] >= 0)
        edges.emplace_back(v, grid.vertex_at[(y + 1) * w + x]);
    }
  }
  Graph g = from_edges(static_cast<int>(grid.cell_of.size()), edges);
  g.grid_ = std::move(grid);
  return g;
}

bool Graph::adjacent(VertexId u, VertexId v) const {
  if (!valid(u) || !valid(v)) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

Graph path_graph(int n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

Graph cycle_graph(int n) {
  if (n < 3) throw ValidationError("cycle needs at least 3 vertices");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph star_graph(int leaves) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

Graph open_grid(int width, int height) {
  if (width <= 0 || height <= 0) throw ValidationError("grid dimensions must be positive");
  GridInfo grid;
  grid.width = width;
  grid.height = height;
  grid.cells.assign(static_cast<std::size_t>(width) * height, '.');
  return Graph::from_grid(std::move(grid));
}

CapacityMap::CapacityMap(std::vector<int> values) : values_(std::move(values)) {
  for (std::size_t v = 0; v < values_.size(); ++v)
    if (values_[v] < 1)
      throw ValidationError("capacity of vertex " + std::to_string(v) + " must be >= 1");
}

CapacityMap CapacityMap::uniform(int vertex_count, int capacity) {
  if (capacity < 1) throw ValidationError("uniform capacity must be >= 1");
  return CapacityMap(std::vector<int>(vertex_count, capacity));
}

long long CapacityMap::total() const {
  return std::accumulate(values_.begin(), values_.end(), 0LL);
}

PerVertexCapacity parse_capacity_file(std::istream& in) {
  PerVertexCapacity result;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long vertex = 0;
    long long capacity = 0;
    if (!(fields >> vertex)) {
      std::string rest;
      fields.clear();
      if (fields >> rest) throw ParseError("expected 'vertex_id capacity'", line_no);
      continue;  // blank line
    }
    std::string extra;
    if (!(fields >> capacity) || (fields >> extra))
      throw ParseError("expected 'vertex_id capacity'", line_no);
    result.entries.emplace_back(static_cast<VertexId>(vertex), static_cast<int>(capacity));
  }
  return result;
}

CapacityMap load_capacities(const CapacitySpec& spec, const Graph& graph) {
  if (const auto* uniform = std::get_if<UniformCapacity>(&spec))
    return CapacityMap::uniform(graph.vertex_count(), uniform->capacity);

  const auto& listing = std::get<PerVertexCapacity>(spec);
  std::vector<int> values(graph.vertex_count(), 1);
  std::vector<bool> seen(graph.vertex_count(), false);
  for (auto [v, c] : listing.entries) {
    if (!graph.valid(v)) throw ValidationError("unknown vertex id " + std::to_string(v));
    if (c < 1)
      throw ValidationError("capacity of vertex " + std::to_string(v) + " must be >= 1");
    if (seen[v]) throw ValidationError("vertex " + std::to_string(v) + " listed twice");
    seen[v] = true;
    values[v] = c;
  }
  return CapacityMap(std::move(values));
}

Instance::Instance(Graph graph, CapacityMap capacities, std::vector<Agent> agents)
    : graph_(std::move(graph)), capacities_(std::move(capacities)), agents_(std::move(agents)) {
  validate_instance(graph_, capacities_, agents_);
}

Instance Instance::with_capacities(CapacityMap capacities) const {
  return Instance(graph_, std::move(capacities), agents_);
}

void validate_instance(const Graph& graph, const CapacityMap& capacities,
                       std::span<const Agent> agents) {
  const int n = graph.vertex_count();
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId u : graph.neighbors(v)) {
      if (!graph.valid(u)) throw ValidationError("adjacency references a missing vertex");
      if (u == v) throw ValidationError("self-loop");
      if (!graph.adjacent(u, v)) throw ValidationError("adjacency is not symmetric");
    }
  }
  if (capacities.size() != n)
    throw ValidationError("capacity map covers " + std::to_string(capacities.size()) +
                          " vertices, graph has " + std::to_string(n));
  if (static_cast<long long>(agents.size()) > capacities.total())
    throw ValidationError("more agents than total vertex capacity");

  std::vector<int> at_start(n, 0);
  std::vector<int> at_goal(n, 0);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Agent& a = agents[i];
    if (a.id != static_cast<AgentId>(i))
      throw ValidationError("agent ids must be 0..k-1 in order");
    if (!graph.valid(a.start) || !graph.valid(a.goal))
      throw ValidationError("agent " + std::to_string(a.id) + " has an invalid vertex");
    if (++at_start[a.start] > capacities[a.start])
      throw ValidationError("start placement exceeds capacity at vertex " +
                            std::to_string(a.start));
    if (++at_goal[a.goal] > capacities[a.goal])
      throw ValidationError("goal placement exceeds capacity at vertex " +
                            std::to_string(a.goal));
  }
}

Graph parse_map(std::istream& in) {
  GridInfo grid;
  grid.width = -1;
  grid.height = -1;
  std::string line;
  int line_no = 0;
  bool have_type = false;

  while (true) {
    if (!std::getline(in, line)) throw ParseError("missing 'map' header line", line_no + 1);
    ++line_no;
    line = strip_cr(line);
    std::istringstream fields(line);
    std::string key;
    std::string value;
    fields >> key;
    if (key == "map") {
      if (fields >> value) throw ParseError("unexpected text after 'map'", line_no);
      break;
    }
    if (!(fields >> value)) throw ParseError("malformed header line '" + line + "'", line_no);
    std::string extra;
    if (fields >> extra) throw ParseError("malformed header line '" + line + "'", line_no);
    if (key == "type" && !have_type) {
      grid.type = value;
      have_type = true;
    } else if (key == "height" && grid.height < 0) {
      grid.height = parse_positive(value, "height", line_no);
    } else if (key == "width" && grid.width < 0) {
      grid.width = parse_positive(value, "width", line_no);
    } else {
      throw ParseError("unexpected header line '" + line + "'", line_no);
    }
  }
  if (!have_type) throw ParseError("missing 'type' header", line_no);
  if (grid.height < 0) throw ParseError("missing 'height' header", line_no);
  if (grid.width < 0) throw ParseError("missing 'width' header", line_no);

  grid.cells.reserve(static_cast<std::size_t>(grid.width) * grid.height);
  for (int row = 0; row < grid.height; ++row) {
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(grid.height) + " rows, found " +
                           std::to_string(row),
                       line_no + 1);
    ++line_no;
    line = strip_cr(line);
    if (static_cast<int>(line.size()) != grid.width)
      throw ParseError("row length " + std::to_string(line.size()) + " != width " +
                           std::to_string(grid.width),
                       line_no);
    for (char c : line) {
      if (!passable_cell(c) && !blocked_cell(c))
        throw ParseError(std::string("unknown cell character '") + c + "'", line_no);
      grid.cells.push_back(c);
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip_cr(line).empty())
      throw ParseError("more than " + std::to_string(grid.height) + " rows", line_no);
  }
  return Graph::from_grid(std::move(grid));
}

Graph parse_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file '" + path + "'");
  return parse_map(in);
}

std::string serialize_map(const Graph& graph) {
  if (!graph.grid()) throw Error("graph has no grid layout to serialize");
  const GridInfo& grid = *graph.grid();
  std::string out = "type " + grid.type + "\nheight " + std::to_string(grid.height) +
                    "\nwidth " + std::to_string(grid.width) + "\nmap\n";
  for (int y = 0; y < grid.height; ++y) {
    out.append(grid.cells.begin() + static_cast<std::ptrdiff_t>(y) * grid.width,
               grid.cells.begin() + static_cast<std::ptrdiff_t>(y + 1) * grid.width);
    out.push_back('\n');
  }
  return out;
}

std::vector<Agent> parse_scenario(std::istream& in, const Graph& graph) {
  if (!graph.grid()) throw Error("scenario files need a graph built from a grid map");
  const GridInfo& grid = *graph.grid();
  std::vector<Agent> agents;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (cols[0] == "version") continue;
    }
    // bucket map width height sx sy gx gy [optimal]
    if (cols.size() < 8 || cols.size() > 9)
      throw ParseError("expected 8 or 9 columns, found " + std::to_string(cols.size()), line_no);
    int coords[4];
    for (int i = 0; i < 4; ++i) {
      std::size_t used = 0;
      try {
        coords[i] = std::stoi(cols[4 + i], &used);
      } catch (const std::exception&) {
        throw ParseError("bad coordinate '" + cols[4 + i] + "'", line_no);
      }
      if (used != cols[4 + i].size())
        throw ParseError("bad coordinate '" + cols[4 + i] + "'", line_no);
    }
    auto start = grid.vertex(coords[0], coords[1]);
    auto goal = grid.vertex(coords[2], coords[3]);
    if (!start)
      throw ParseError("start (" + cols[4] + "," + cols[5] + ") is blocked or out of bounds",
                       line_no);
    if (!goal)
      throw ParseError("goal (" + cols[6] + "," + cols[7] + ") is blocked or out of bounds",
                       line_no);
    agents.push_back(Agent{static_cast<AgentId>(agents.size()), *start, *goal});
  }
  return agents;
}

std::vector<Agent> parse_scenario_file(const std::string& path, const Graph& graph) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  return parse_scenario(in, graph);
}

namespace {

// Fisher-Yates over capacity slots, using only the raw mt19937_64 stream so the
// draw is identical across standard library implementations.
std::vector<VertexId> draw_placement(const CapacityMap& capacities, int k, std::mt19937_64& rng) {
  std::vector<VertexId> slots;
  for (VertexId v = 0; v < capacities.size(); ++v)
    for (int c = 0; c < capacities[v]; ++c) slots.push_back(v);
  for (int i = 0; i < k; ++i) {
    std::uint64_t span = slots.size() - i;
    std::size_t j = i + static_cast<std::size_t>(rng() % span);
    std::swap(slots[i], slots[j]);
  }
  slots.resize(k);
  return slots;
}

}  // namespace

std::vector<Agent> random_agents(const Graph& graph, const CapacityMap& capacities, int k,
                                 std::uint64_t seed) {
  if (capacities.size() != graph.vertex_count())
    throw ValidationError("capacity map does not match graph");
  if (k < 0 || k > capacities.total())
    throw ValidationError("cannot place " + std::to_string(k) + " agents within total capacity " +
                          std::to_string(capacities.total()));
  std::mt19937_64 rng(seed);
  auto starts = draw_placement(capacities, k, rng);
  auto goals = draw_placement(capacities, k, rng);
  std::vector<Agent> agents;
  for (int i = 0; i < k; ++i) agents.push_back(Agent{i, starts[i], goals[i]});
  return agents;
}

Instance generate_random(int width, int height, int k, int capacity, std::uint64_t seed) {
  if (capacity < 1) throw ValidationError("capacity must be >= 1");
  Graph graph = open_grid(width, height);
  CapacityMap caps = CapacityMap::uniform(graph.vertex_count(), capacity);
  auto agents = random_agents(graph, caps, k, seed);
  return Instance(std::move(graph), std::move(caps), std::move(agents));
}

}  // namespace capmapf
