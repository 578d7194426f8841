#include "capmapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "capmapf/error.hpp"
#include "capmapf/solvers.hpp"

namespace capmapf {

BenchRecord run_single(const Instance& instance, const std::string& instance_id,
                       const std::string& solver, int capacity, double timeout_seconds,
                       MoveRule rule) {
  BenchRecord rec;
  rec.instance = instance_id;
  rec.solver = solver;
  rec.capacity = capacity;
  rec.k = instance.agent_count();

  SolveOptions options;
  options.limits.timeout_seconds = timeout_seconds;
  options.rule = rule;
  const auto start = std::chrono::steady_clock::now();
  try {
    SolveReport report;
    if (solver == "eager")
      report = solve_eager(instance, options);
    else if (solver == "lazy")
      report = solve_lazy(instance, options);
    else
      throw std::invalid_argument("unknown solver '" + solver + "'");
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (report.solved()) {
      rec.outcome = "solved";
      rec.cost = report.optimal_cost;
    } else {
      rec.outcome = report.exhausted_reason == "timeout" ? "timeout" : "exhausted";
    }
    for (const auto& it : report.iterations) {
      rec.vars = it.variables;
      rec.clauses = it.clauses;
    }
    rec.refinements = report.total_refinements();
  } catch (const UnsolvableError&) {
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.outcome = "unsolvable";
  }
  return rec;
}

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  if (config.instances < 0) throw std::invalid_argument("negative instance count");
  for (int c : config.capacities)
    if (c < 1) throw std::invalid_argument("capacities must be >= 1");
  for (const auto& s : config.solvers)
    if (s != "eager" && s != "lazy") throw std::invalid_argument("unknown solver '" + s + "'");

  Graph graph = config.map_path ? parse_map_file(*config.map_path)
                                : open_grid(config.width, config.height);
  std::string prefix =
      config.map_path ? std::filesystem::path(*config.map_path).stem().string()
                      : std::to_string(config.width) + "x" + std::to_string(config.height);

  struct Cell {
    const Instance* instance;
    std::string id;
    std::string solver;
    int capacity;
  };
  std::vector<Instance> instances;
  std::vector<std::string> ids;
  CapacityMap ones = CapacityMap::uniform(graph.vertex_count(), 1);
  for (int k : config.agent_counts) {
    for (int i = 0; i < config.instances; ++i) {
      std::uint64_t seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(k) * 7919ULL + i;
      instances.emplace_back(graph, ones, random_agents(graph, ones, k, seed));
      ids.push_back(prefix + "-k" + std::to_string(k) + "-i" + std::to_string(i));
    }
  }
  std::vector<std::unique_ptr<Instance>> variants;
  std::vector<Cell> cells;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    for (int c : config.capacities) {
      variants.push_back(std::make_unique<Instance>(
          instances[n].with_capacities(CapacityMap::uniform(graph.vertex_count(), c))));
      for (const auto& s : config.solvers) cells.push_back({variants.back().get(), ids[n], s, c});
    }
  }

  std::vector<BenchRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();)
      records[i] = run_single(*cells[i].instance, cells[i].id, cells[i].solver, cells[i].capacity,
                              config.timeout_seconds, config.rule);
  };
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return records;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.instance << ',' << r.solver << ',' << r.capacity << ',' << r.k << ',' << r.outcome
        << ',';
    if (r.outcome == "solved") out << r.cost;
    out << ',' << std::fixed << std::setprecision(6) << r.time_s << std::defaultfloat << ','
        << r.vars << ',' << r.clauses << ',' << r.refinements << '\n';
  }
}

void write_sorted_runtimes(std::ostream& out, std::span<const BenchRecord> records) {
  std::map<std::pair<std::string, int>, std::vector<double>> series;
  for (const auto& r : records)
    if (r.outcome == "solved") series[{r.solver, r.capacity}].push_back(r.time_s);
  out << "solver,capacity,rank,time_s\n";
  for (auto& [key, times] : series) {
    std::sort(times.begin(), times.end());
    for (std::size_t i = 0; i < times.size(); ++i)
      out << key.first << ',' << key.second << ',' << i + 1 << ',' << std::fixed
          << std::setprecision(6) << times[i] << std::defaultfloat << '\n';
  }
}

}  // namespace capmapf
