#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "capmapf/error.hpp"
#include "capmapf/instance.hpp"

using namespace capmapf;

namespace {

Graph map_from(const std::string& text) {
  std::istringstream in(text);
  return parse_map(in);
}

std::string map_text(int w, int h, const std::string& rows) {
  return "type octile\nheight " + std::to_string(h) + "\nwidth " + std::to_string(w) + "\nmap\n" +
         rows;
}

}  // namespace

TEST_CASE("parse_map: full 2x2 square") {
  Graph g = map_from(map_text(2, 2, "..\n..\n"));
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(0, 2));
  CHECK_FALSE(g.adjacent(0, 3));
}

TEST_CASE("parse_map: blocked corner drops vertex and edges") {
  Graph g = map_from(map_text(2, 2, ".@\n..\n"));
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("parse_map: single row is a path") {
  Graph g = map_from(map_text(3, 1, "...\n"));
  REQUIRE(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 2));
  CHECK_FALSE(g.adjacent(0, 2));
  REQUIRE(g.grid().has_value());
  CHECK(g.grid()->vertex(2, 0) == 2);
}

TEST_CASE("parse_map: errors carry the line number") {
  auto line_of = [](const std::string& text) {
    try {
      map_from(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of(map_text(3, 2, "...\n..\n")) == 6);
  CHECK(line_of(map_text(3, 2, "...\n")) > 0);
  CHECK(line_of(map_text(3, 1, ".x.\n")) == 5);
  CHECK(line_of("type octile\nheight two\nwidth 3\nmap\n...\n") == 2);
  CHECK(line_of("type octile\nheight 1\nwidth 3\n...\n") > 0);
}

TEST_CASE("parse_map: adjacency is symmetric and sorted on random masks") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 30; ++round) {
    int w = 1 + static_cast<int>(rng() % 7);
    int h = 1 + static_cast<int>(rng() % 7);
    std::string rows;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) rows += (rng() % 4 == 0) ? '@' : '.';
      rows += '\n';
    }
    Graph g = map_from(map_text(w, h, rows));
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      auto nb = g.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (VertexId v : nb) {
        CHECK(v != u);
        CHECK(g.adjacent(v, u));
      }
    }
    // serialize -> parse -> serialize is byte stable
    std::string once = serialize_map(g);
    CHECK(serialize_map(map_from(once)) == once);
  }
}

TEST_CASE("from_edges rejects self loops and bad ids, merges duplicates") {
  std::vector<std::pair<VertexId, VertexId>> loop{{1, 1}};
  CHECK_THROWS_AS(Graph::from_edges(3, loop), ValidationError);
  std::vector<std::pair<VertexId, VertexId>> out{{0, 3}};
  CHECK_THROWS_AS(Graph::from_edges(3, out), ValidationError);
  std::vector<std::pair<VertexId, VertexId>> dup{{0, 1}, {1, 0}, {0, 1}};
  Graph g = Graph::from_edges(2, dup);
  CHECK(g.edge_count() == 1);
  CHECK(g.neighbors(0).size() == 1);
}

TEST_CASE("parse_scenario") {
  Graph g = map_from(map_text(3, 1, "...\n"));
  SUBCASE("one agent") {
    std::istringstream in("version 1\n0\tx.map\t3\t1\t0\t0\t2\t0\t2.0\n");
    auto agents = parse_scenario(in, g);
    REQUIRE(agents.size() == 1);
    CHECK(agents[0] == Agent{0, 0, 2});
  }
  SUBCASE("empty body") {
    std::istringstream in("version 1\n");
    CHECK(parse_scenario(in, g).empty());
  }
  SUBCASE("blocked cell") {
    Graph blocked = map_from(map_text(3, 1, ".@.\n"));
    std::istringstream in("version 1\n0 x.map 3 1 0 0 1 0 1\n");
    try {
      parse_scenario(in, blocked);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("out of bounds") {
    std::istringstream in("version 1\n0 x.map 3 1 0 0 5 0 1\n");
    CHECK_THROWS_AS(parse_scenario(in, g), ParseError);
  }
  SUBCASE("graph without grid") {
    std::istringstream in("version 1\n");
    CHECK_THROWS_AS(parse_scenario(in, path_graph(3)), Error);
  }
}

TEST_CASE("load_capacities") {
  CHECK(load_capacities(UniformCapacity{2}, path_graph(4)).values() == std::vector<int>{2, 2, 2, 2});
  std::istringstream file("# middle vertex\n1 3\n");
  CHECK(load_capacities(parse_capacity_file(file), path_graph(3)).values() ==
        std::vector<int>{1, 3, 1});
  CHECK_THROWS_AS(load_capacities(UniformCapacity{0}, path_graph(3)), ValidationError);
  CHECK_THROWS_AS(load_capacities(PerVertexCapacity{{{7, 2}}}, path_graph(3)), ValidationError);
  CHECK_THROWS_AS(load_capacities(PerVertexCapacity{{{1, -1}}}, path_graph(3)), ValidationError);
}

TEST_CASE("Instance validation") {
  Graph g = path_graph(3);
  CHECK_NOTHROW(Instance(g, CapacityMap::uniform(3, 1), {{0, 0, 2}, {1, 2, 0}}));
  // stacked starts need capacity
  CHECK_THROWS_AS(Instance(g, CapacityMap::uniform(3, 1), {{0, 0, 2}, {1, 0, 1}}), ValidationError);
  CHECK_NOTHROW(Instance(g, CapacityMap::uniform(3, 2), {{0, 0, 2}, {1, 0, 1}}));
  // goals too
  CHECK_THROWS_AS(Instance(g, CapacityMap::uniform(3, 1), {{0, 0, 2}, {1, 1, 2}}), ValidationError);
  CHECK_THROWS_AS(Instance(g, CapacityMap::uniform(3, 1), {{0, 0, 5}}), ValidationError);
  CHECK_THROWS_AS(Instance(g, CapacityMap::uniform(3, 1), {{1, 0, 2}}), ValidationError);
  CHECK_THROWS_AS(Instance(g, CapacityMap::uniform(2, 1), {{0, 0, 1}}), ValidationError);
}

TEST_CASE("generate_random") {
  SUBCASE("8x8 with 10 agents has distinct endpoints") {
    Instance inst = generate_random(8, 8, 10, 1, 42);
    CHECK(inst.graph().vertex_count() == 64);
    CHECK(inst.agent_count() == 10);
    std::set<VertexId> starts, goals;
    for (const Agent& a : inst.agents()) {
      starts.insert(a.start);
      goals.insert(a.goal);
    }
    CHECK(starts.size() == 10);
    CHECK(goals.size() == 10);
  }
  SUBCASE("capacity 2 allows stacking") {
    bool stacked = false;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Instance inst = generate_random(3, 1, 2, 2, seed);
      CHECK(inst.graph().vertex_count() == 3);
      stacked = stacked || inst.agent(0).start == inst.agent(1).start;
    }
    CHECK(stacked);
  }
  SUBCASE("deterministic") {
    Instance a = generate_random(8, 8, 10, 2, 7);
    Instance b = generate_random(8, 8, 10, 2, 7);
    CHECK(a.agents() == b.agents());
    CHECK(a.capacities().values() == b.capacities().values());
  }
  SUBCASE("infeasible k") {
    CHECK_THROWS_AS(generate_random(2, 2, 5, 1, 1), ValidationError);
    CHECK_NOTHROW(generate_random(2, 2, 8, 2, 1));
  }
}
