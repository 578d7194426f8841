#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capmapf/instance.hpp"

namespace capmapf {

struct BenchConfig {
  int width = 8;
  int height = 8;
  std::optional<std::string> map_path;  // overrides the open grid
  std::vector<int> agent_counts{10};
  std::vector<int> capacities{1, 2, 3};
  int instances = 25;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers{"eager", "lazy"};
  double timeout_seconds = 500.0;
  int jobs = 1;
  MoveRule rule = MoveRule::kAllowFollow;
};

struct BenchRecord {
  std::string instance;
  std::string solver;
  int capacity = 1;
  int k = 0;
  std::string outcome;  // solved, timeout, exhausted, unsolvable
  int cost = -1;
  double time_s = 0;
  int vars = 0;
  std::size_t clauses = 0;  // final formula of the run
  int refinements = 0;
};

inline constexpr const char* kBenchCsvHeader =
    "instance,solver,capacity,k,outcome,cost,time_s,vars,clauses,refinements";

// Agent placements are drawn once per (k, instance) without stacking and reused
// for every capacity, so rows differ only in the capacity. Rows come back
// ordered by k, instance, capacity, solver regardless of `jobs`.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

BenchRecord run_single(const Instance& instance, const std::string& instance_id,
                       const std::string& solver, int capacity, double timeout_seconds,
                       MoveRule rule = MoveRule::kAllowFollow);

void write_csv(std::ostream& out, std::span<const BenchRecord> records);
// Solved runs only, per (solver, capacity) sorted by time: solver,capacity,rank,time_s
void write_sorted_runtimes(std::ostream& out, std::span<const BenchRecord> records);

}  // namespace capmapf
