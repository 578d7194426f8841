// Command-line front end: solve, bench, export-cnf, validate, sat, mdd.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "capmapf/bench.hpp"
#include "capmapf/cnf.hpp"
#include "capmapf/encoder.hpp"
#include "capmapf/error.hpp"
#include "capmapf/instance.hpp"
#include "capmapf/mdd.hpp"
#include "capmapf/pathcalc.hpp"
#include "capmapf/satcore.hpp"
#include "capmapf/solvers.hpp"
#include "capmapf/verify.hpp"

using namespace capmapf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitExhausted = 2;

struct InstanceFlags {
  std::string map;
  std::string scen;
  std::optional<int> capacity;
  std::string capacity_file;
  std::optional<int> agents;
  std::uint64_t seed = 1;
  bool no_follow = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--map", map, "movingai .map file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--scen", scen, "movingai .scen file (random agents when omitted)")
        ->check(CLI::ExistingFile);
    auto* cap = cmd->add_option("--capacity", capacity, "uniform vertex capacity")
                    ->check(CLI::PositiveNumber);
    cmd->add_option("--capacity-file", capacity_file, "per-vertex capacities")
        ->check(CLI::ExistingFile)
        ->excludes(cap);
    cmd->add_option("--agents", agents, "number of agents to take")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "seed for random agents");
    cmd->add_flag("--no-follow", no_follow, "forbid entering a full vertex even if it is vacated");
  }

  MoveRule rule() const { return no_follow ? MoveRule::kNoFollow : MoveRule::kAllowFollow; }

  Instance load() const {
    Graph graph = parse_map_file(map);
    CapacityMap caps;
    if (!capacity_file.empty()) {
      std::ifstream in(capacity_file);
      caps = load_capacities(parse_capacity_file(in), graph);
    } else {
      caps = load_capacities(UniformCapacity{capacity.value_or(1)}, graph);
    }
    std::vector<Agent> agents;
    if (!scen.empty()) {
      agents = parse_scenario_file(scen, graph);
      if (this->agents) {
        if (*this->agents > static_cast<int>(agents.size()))
          throw ValidationError("scenario has only " + std::to_string(agents.size()) + " agents");
        agents.resize(*this->agents);
      }
    } else {
      if (!this->agents) throw ValidationError("--agents is required without --scen");
      agents = random_agents(graph, caps, *this->agents, seed);
    }
    return Instance(std::move(graph), std::move(caps), std::move(agents));
  }
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal multi-agent path finding with vertex capacities"};
  app.require_subcommand(1);

  // solve
  InstanceFlags solve_flags;
  std::string solver_name = "eager";
  double solve_timeout = 500;
  bool subsets = false;
  auto* solve = app.add_subcommand("solve", "solve one instance optimally");
  solve_flags.attach(solve);
  solve->add_option("--solver", solver_name)->check(CLI::IsMember({"eager", "lazy"}));
  solve->add_option("--timeout", solve_timeout, "seconds")->check(CLI::PositiveNumber);
  solve->add_flag("--subset-clauses", subsets, "lazy: one clause per (c+1)-subset of a conflict");

  // bench
  BenchConfig bench_cfg;
  std::string grid = "8x8";
  std::string bench_map;
  std::string agent_list = "10";
  std::string capacity_list = "1,2,3";
  std::string solver_list = "eager,lazy";
  bool sorted = false;
  bool bench_no_follow = false;
  auto* bench = app.add_subcommand("bench", "run a benchmark grid and print CSV");
  bench->add_option("--grid", grid, "open grid WxH");
  bench->add_option("--map", bench_map, "movingai .map file instead of a grid")
      ->check(CLI::ExistingFile);
  bench->add_option("--agents", agent_list, "comma-separated agent counts");
  bench->add_option("--capacities", capacity_list, "comma-separated uniform capacities");
  bench->add_option("--instances", bench_cfg.instances, "instances per cell")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bench_cfg.seed);
  bench->add_option("--solvers", solver_list);
  bench->add_option("--timeout", bench_cfg.timeout_seconds, "seconds per run")
      ->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bench_cfg.jobs)->check(CLI::PositiveNumber);
  bench->add_flag("--sorted", sorted, "print the sorted-runtime table instead of raw rows");
  bench->add_flag("--no-follow", bench_no_follow);

  // export-cnf
  InstanceFlags export_flags;
  std::string xi_text = "auto";
  std::string mode = "complete";
  std::string out_path;
  auto* exporter = app.add_subcommand("export-cnf", "write the encoding at one cost bound");
  export_flags.attach(exporter);
  exporter->add_option("--xi", xi_text, "cost bound or 'auto' for the lower bound");
  exporter->add_option("--mode", mode)->check(CLI::IsMember({"complete", "basic"}));
  exporter->add_option("--out", out_path, "output file (default stdout)");

  // validate
  InstanceFlags validate_flags;
  std::string plan_path;
  auto* validate = app.add_subcommand("validate", "check a plan file");
  validate_flags.attach(validate);
  validate->add_option("--plan", plan_path)->required()->check(CLI::ExistingFile);

  // sat
  std::string cnf_path;
  auto* sat = app.add_subcommand("sat", "solve a DIMACS CNF file");
  sat->add_option("file", cnf_path)->required()->check(CLI::ExistingFile);

  // mdd
  InstanceFlags mdd_flags;
  int mdd_agent = 0;
  std::string mdd_xi = "auto";
  auto* mdd = app.add_subcommand("mdd", "print one agent's time expansion");
  mdd_flags.attach(mdd);
  mdd->add_option("--agent", mdd_agent)->check(CLI::NonNegativeNumber);
  mdd->add_option("--xi", mdd_xi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  auto resolve_xi = [](const std::string& text, const Instance& inst) {
    return text == "auto" ? cost_lower_bound(inst) : std::stoi(text);
  };

  try {
    if (*solve) {
      Instance inst = solve_flags.load();
      SolveOptions options;
      options.limits.timeout_seconds = solve_timeout;
      options.rule = solve_flags.rule();
      options.conflict_mode = subsets ? ConflictClauseMode::kSubsets : ConflictClauseMode::kFullSet;
      SolveReport report =
          solver_name == "lazy" ? solve_lazy(inst, options) : solve_eager(inst, options);
      if (!report.solved()) {
        std::cerr << "resource exhausted (" << report.exhausted_reason << ") after "
                  << report.iterations.size() << " cost bounds\n";
        return kExitExhausted;
      }
      write_plan(std::cout, report.plan->trimmed());
      return kExitOk;
    }

    if (*bench) {
      if (!bench_map.empty()) {
        bench_cfg.map_path = bench_map;
      } else {
        auto x = grid.find('x');
        if (x == std::string::npos) throw ValidationError("--grid expects WxH");
        bench_cfg.width = std::stoi(grid.substr(0, x));
        bench_cfg.height = std::stoi(grid.substr(x + 1));
      }
      bench_cfg.agent_counts = parse_int_list(agent_list);
      bench_cfg.capacities = parse_int_list(capacity_list);
      bench_cfg.solvers = parse_word_list(solver_list);
      bench_cfg.rule = bench_no_follow ? MoveRule::kNoFollow : MoveRule::kAllowFollow;
      auto records = run_bench(bench_cfg);
      if (sorted)
        write_sorted_runtimes(std::cout, records);
      else
        write_csv(std::cout, records);
      return kExitOk;
    }

    if (*exporter) {
      Instance inst = export_flags.load();
      int xi = resolve_xi(xi_text, inst);
      EncodeOptions options{export_flags.rule()};
      EncodingArtifacts art = mode == "basic" ? encode_basic(inst, xi, {}, options)
                                              : encode_complete(inst, xi, options);
      if (art.empty_mdd) throw Error("some agent cannot reach its goal within the horizon");
      if (out_path.empty()) {
        write_dimacs(std::cout, art.formula);
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write '" + out_path + "'");
        write_dimacs(out, art.formula);
      }
      return kExitOk;
    }

    if (*validate) {
      Instance inst = validate_flags.load();
      std::ifstream in(plan_path);
      Plan plan = parse_plan(in);
      auto violations = validate_plan(inst, plan, validate_flags.rule());
      for (const auto& v : violations) std::cout << v.describe() << '\n';
      if (!violations.empty()) return kExitError;
      std::cout << "valid cost=" << sum_of_costs(plan) << " makespan=" << makespan(plan) << '\n';
      return kExitOk;
    }

    if (*sat) {
      std::ifstream in(cnf_path);
      CnfFormula formula = parse_dimacs(in);
      Solver solver;
      solver.add_formula(formula);
      SatResult result = solver.solve();
      if (result.outcome == SatOutcome::kSat) {
        std::cout << "s SATISFIABLE\nv";
        for (Var v = 1; v <= formula.variable_count(); ++v)
          std::cout << ' ' << (result.value(v) ? v : -v);
        std::cout << " 0\n";
        return 10;
      }
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }

    if (*mdd) {
      Instance inst = mdd_flags.load();
      if (mdd_agent >= inst.agent_count()) throw ValidationError("no such agent");
      int horizon = compute_horizon(inst, resolve_xi(mdd_xi, inst));
      std::cout << dump_mdd(build_mdd(inst, mdd_agent, horizon));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
