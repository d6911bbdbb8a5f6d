// ertkit command-line front end: scenario and experience generation,
// single-query planning, benchmarking and SVG rendering.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ertkit/bench/runner.hpp>
#include <ertkit/bench/scenarios.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/io/json.hpp>
#include <ertkit/io/svg.hpp>

namespace fs = std::filesystem;
using namespace ertkit;

namespace
{
constexpr int kExitOk = 0;
constexpr int kExitTimeout = 1;
constexpr int kExitUsage = 2;

/// Deterministic bench runs stop on iterations only; this is their default budget.
constexpr uint64_t kDeterministicIterations = 20000;

bench::RobotKind ParseRobot(const std::string& name)
{
  if (name == "point2d") return bench::RobotKind::Point2d;
  if (name == "arm" || name == "planar_arm") return bench::RobotKind::PlanarArm;
  Throw(ErrorCode::InvalidArgument, "unknown robot '" + name + "'");
}

std::vector<std::string> SplitCommas(const std::string& text)
{
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ','))
  {
    if (!part.empty())
    {
      parts.push_back(part);
    }
  }
  return parts;
}

void RequireFile(const std::string& path)
{
  if (!fs::exists(path))
  {
    Throw(ErrorCode::MalformedInput, "no such file: " + path);
  }
}

struct ParamFlags
{
  std::string params_file;
  std::optional<double> timeout;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> max_iterations;

  void Attach(CLI::App* app)
  {
    app->add_option("--params", params_file, "planner parameter JSON file");
    app->add_option("--timeout", timeout, "planning timeout in seconds");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--max-iterations", max_iterations, "iteration budget per query");
  }

  PlannerParams Resolve() const
  {
    PlannerParams params;
    if (!params_file.empty())
    {
      RequireFile(params_file);
      params = io::ParamsFromJson(io::ReadJson(params_file));
    }
    if (timeout) params.timeout = *timeout;
    if (seed) params.seed = *seed;
    if (max_iterations) params.max_iterations = *max_iterations;
    params.Validate();
    return params;
  }
};

const QueryInstance& PickScenario(const std::vector<QueryInstance>& suite, const size_t index)
{
  if (index >= suite.size())
  {
    Throw(ErrorCode::InvalidArgument, "scenario index " + std::to_string(index) + " out of range");
  }
  return suite[index];
}
}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Experience-driven random tree planning toolkit"};
  app.require_subcommand(1);

  // gen-scenarios
  int set_id = 1;
  int count = 100;
  uint64_t seed = 0;
  std::string robot = "arm";
  std::string out;
  auto* gen_scenarios = app.add_subcommand("gen-scenarios", "generate a scenario suite");
  gen_scenarios->add_option("--set", set_id, "scenario set 1-4")->check(CLI::Range(1, 4));
  gen_scenarios->add_option("--count", count, "number of instances");
  gen_scenarios->add_option("--seed", seed, "suite seed");
  gen_scenarios->add_option("--robot", robot, "point2d or arm");
  gen_scenarios->add_option("--out", out, "suite JSON file")->required();

  // gen-experiences
  ParamFlags experience_flags;
  auto* gen_experiences = app.add_subcommand("gen-experiences", "build an experience library");
  gen_experiences->add_option("--count", count, "number of experiences");
  gen_experiences->add_option("--robot", robot, "point2d or arm");
  gen_experiences->add_option("--out", out, "library directory")->required();
  experience_flags.Attach(gen_experiences);

  // plan
  ParamFlags plan_flags;
  std::string scenario_file;
  size_t scenario_index = 0;
  std::string lib_dir;
  std::string planner = "ertconnect";
  std::string result_file;
  bool keep_trees = false;
  bool grow = false;
  auto* plan = app.add_subcommand("plan", "solve one query");
  plan->add_option("--scenario", scenario_file, "scenario or suite JSON file")->required();
  plan->add_option("--index", scenario_index, "instance index within the suite");
  plan->add_option("--lib", lib_dir, "experience library directory");
  plan->add_option("--planner", planner, "ert, ertconnect or rrtconnect");
  plan->add_option("--out", out, "solution path file (written only when solved)");
  plan->add_option("--result", result_file, "full result JSON file");
  plan->add_flag("--keep-trees", keep_trees, "store trees and mapped prior in the result");
  plan->add_flag("--grow", grow, "append the solution to the --lib library");
  plan_flags.Attach(plan);

  // bench
  ParamFlags bench_flags;
  std::string lib_sizes = "1,5,50,100";
  std::string planners = "ert,ertconnect,rrtconnect";
  int reps = 5;
  std::string summary_file;
  bool deterministic = false;
  unsigned threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "run the benchmark protocol");
  bench_cmd->add_option("--scenario", scenario_file, "suite JSON file (else generated)");
  bench_cmd->add_option("--set", set_id, "scenario set 1-4 when generating")
      ->check(CLI::Range(1, 4));
  bench_cmd->add_option("--count", count, "instances when generating");
  bench_cmd->add_option("--robot", robot, "point2d or arm when generating");
  bench_cmd->add_option("--lib", lib_dir, "experience library directory (else generated)");
  bench_cmd->add_option("--lib-sizes", lib_sizes, "comma-separated library prefixes");
  bench_cmd->add_option("--planner", planners, "comma-separated planners");
  bench_cmd->add_option("--reps", reps, "repetitions per query");
  bench_cmd->add_option("--out", out, "records CSV file")->required();
  bench_cmd->add_option("--summary", summary_file, "summary JSON file");
  bench_cmd->add_option("--threads", threads, "worker threads (0: ERTKIT_THREADS or all cores)");
  bench_cmd->add_flag("--deterministic", deterministic,
                      "iteration budget only, no wall-clock stop, elapsed column NA");
  bench_flags.Attach(bench_cmd);

  // render
  auto* render = app.add_subcommand("render", "draw a scene to SVG");
  render->add_option("--scenario", scenario_file, "scenario or suite JSON file")->required();
  render->add_option("--index", scenario_index, "instance index within the suite");
  render->add_option("--result", result_file, "result JSON file from plan");
  render->add_option("--out", out, "SVG file")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try
  {
    if (*gen_scenarios)
    {
      const auto spec = bench::ScenarioSpec::ForSet(set_id, count, seed, ParseRobot(robot));
      io::SaveSuite(out, bench::GenerateScenarios(spec));
      return kExitOk;
    }
    if (*gen_experiences)
    {
      const PlannerParams params = experience_flags.Resolve();
      const auto build = bench::BuildExperienceLibrary(count, params.seed, ParseRobot(robot), params);
      io::SaveLibrary(out, build.library);
      return kExitOk;
    }
    if (*plan)
    {
      RequireFile(scenario_file);
      const auto suite = io::LoadSuite(scenario_file);
      const QueryInstance& query = PickScenario(suite, scenario_index);
      PlannerParams params = plan_flags.Resolve();
      params.keep_trees = params.keep_trees || keep_trees;
      const bench::PlannerKind kind = bench::ParsePlanner(planner);
      std::optional<ExperienceLibrary> library;
      const PathExperience* prior = nullptr;
      if (bench::UsesExperience(kind))
      {
        if (lib_dir.empty())
        {
          Throw(ErrorCode::InvalidArgument, "--lib is required for " + planner);
        }
        library = io::LoadLibrary(lib_dir);
        prior = &SelectExperience(*library, query.q_start, query.q_goal);
      }
      else if (grow)
      {
        if (lib_dir.empty())
        {
          Throw(ErrorCode::InvalidArgument, "--grow needs --lib");
        }
        library = fs::exists(fs::path(lib_dir) / "index.json") ? io::LoadLibrary(lib_dir)
                                                                 : ExperienceLibrary{};
      }
      const PlanResult result = bench::RunPlanner(kind, query, prior, params);
      if (!result_file.empty())
      {
        io::WriteAtomically(result_file, io::Dump(io::ResultToJson(result)));
      }
      if (result.status == PlanStatus::InvalidQuery)
      {
        Throw(ErrorCode::InvalidArgument, "invalid query: start/goal invalid or identical");
      }
      if (!result.Solved())
      {
        std::cerr << "timeout: no solution after " << result.stats.iterations << " iterations\n";
        return kExitTimeout;
      }
      if (!out.empty())
      {
        io::SavePath(out, *result.path);
      }
      if (grow)
      {
        if (lib_dir.empty())
        {
          Throw(ErrorCode::InvalidArgument, "--grow needs --lib");
        }
        library->Append(*result.path);
        io::SaveLibrary(lib_dir, *library);
      }
      return kExitOk;
    }
    if (*bench_cmd)
    {
      PlannerParams params = bench_flags.Resolve();
      std::vector<QueryInstance> suite;
      if (!scenario_file.empty())
      {
        RequireFile(scenario_file);
        suite = io::LoadSuite(scenario_file);
      }
      else
      {
        const auto spec =
            bench::ScenarioSpec::ForSet(set_id, count, params.seed, ParseRobot(robot));
        suite = bench::GenerateScenarios(spec);
      }
      if (suite.empty())
      {
        Throw(ErrorCode::MalformedInput, "empty scenario suite");
      }
      bench::BenchOptions options;
      options.planners.clear();
      for (const auto& name : SplitCommas(planners))
      {
        options.planners.push_back(bench::ParsePlanner(name));
      }
      options.library_sizes.clear();
      for (const auto& size : SplitCommas(lib_sizes))
      {
        options.library_sizes.push_back(static_cast<size_t>(std::stoul(size)));
      }
      options.repetitions = reps;
      options.seed = params.seed;
      options.threads = threads;
      if (deterministic)
      {
        params.enforce_timeout = false;
        if (!bench_flags.max_iterations)
        {
          params.max_iterations = kDeterministicIterations;
        }
      }
      options.params = params;

      ExperienceLibrary library;
      const bool needs_library =
          std::any_of(options.planners.begin(), options.planners.end(), bench::UsesExperience);
      if (!lib_dir.empty())
      {
        library = io::LoadLibrary(lib_dir);
      }
      else if (needs_library)
      {
        const size_t largest =
            *std::max_element(options.library_sizes.begin(), options.library_sizes.end());
        const auto kind = suite.front().world.Kind() == WorldKind::Point2d
                              ? bench::RobotKind::Point2d
                              : bench::RobotKind::PlanarArm;
        library = bench::BuildExperienceLibrary(static_cast<int>(largest), params.seed, kind).library;
      }
      const auto records = bench::RunBenchmark(suite, library, options);
      io::WriteAtomically(out, bench::RecordsToCsv(records, !deterministic));
      if (!summary_file.empty())
      {
        io::WriteAtomically(summary_file, io::Dump(bench::SummaryToJson(bench::Summarize(records))));
      }
      return kExitOk;
    }
    if (*render)
    {
      RequireFile(scenario_file);
      const auto suite = io::LoadSuite(scenario_file);
      io::Scene scene;
      scene.query = &PickScenario(suite, scenario_index);
      if (!result_file.empty())
      {
        RequireFile(result_file);
        io::StoredResult stored = io::ResultFromJson(io::ReadJson(result_file));
        scene.tree_edges = std::move(stored.tree_edges);
        scene.prior = std::move(stored.mapped_prior);
        scene.solution = std::move(stored.path);
      }
      io::WriteAtomically(out, io::RenderSvg(scene));
      return kExitOk;
    }
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
