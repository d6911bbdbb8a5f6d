#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include <ertkit/bench/scenarios.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/io/json.hpp>
#include <ertkit/io/svg.hpp>
#include <ertkit/planners/ert.hpp>

#include "test_util.hpp"

using namespace ertkit;
using ertkit::testing::PathOf;
using ertkit::testing::Q;
namespace fs = std::filesystem;

namespace
{
fs::path TempDir(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("ertkit_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode CodeOf(const auto& fn)
{
  try
  {
    fn();
  }
  catch (const Error& e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST(PathIo, RoundTripRecomputesPhases)
{
  const PathExperience path = PathOf({Q({0.1, 0.2}), Q({1.0 / 3.0, 0.7}), Q({2, 2})});
  const fs::path file = TempDir("path") / "p.json";
  io::SavePath(file, path);
  const auto j = io::ReadJson(file);
  EXPECT_EQ(j.at("dimension"), 2);
  EXPECT_FALSE(j.contains("phases"));
  EXPECT_EQ(io::LoadPath(file), path);
}

TEST(PathIo, MalformedInputs)
{
  EXPECT_EQ(CodeOf([] { io::PathFromJson(io::ParseJson(R"({"dimension": 2})", "t")); }),
            ErrorCode::MalformedInput);
  EXPECT_EQ(CodeOf([] { io::PathFromJson(io::ParseJson(R"({"dimension": 2, "waypoints": [[0, "a"], [1, 1]]})", "t")); }),
            ErrorCode::MalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParseJson("{not json", "t"); }), ErrorCode::MalformedInput);
  EXPECT_EQ(CodeOf([] { io::PathFromJson(io::ParseJson(R"({"dimension": 3, "waypoints": [[0, 0], [1, 1]]})", "t")); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(CodeOf([] { io::ReadJson("/nonexistent/ertkit/file.json"); }), ErrorCode::MalformedInput);
}

TEST(SuiteIo, RoundTripBothRobots)
{
  for (const auto robot : {bench::RobotKind::Point2d, bench::RobotKind::PlanarArm})
  {
    const auto suite = bench::GenerateScenarios(bench::ScenarioSpec::ForSet(3, 5, 8, robot));
    const fs::path file = TempDir("suite") / "suite.json";
    io::SaveSuite(file, suite);
    const auto loaded = io::LoadSuite(file);
    ASSERT_EQ(loaded.size(), suite.size());
    for (size_t i = 0; i < suite.size(); i++)
    {
      EXPECT_EQ(loaded[i].world, suite[i].world);
      EXPECT_EQ(loaded[i].q_start, suite[i].q_start);
      EXPECT_EQ(loaded[i].q_goal, suite[i].q_goal);
      EXPECT_EQ(loaded[i].label, suite[i].label);
    }
  }
}

TEST(SuiteIo, TaggedShapes)
{
  const auto j = io::ParseJson(R"({
    "kind": "point2d", "bounds": {"lo": [0, 0], "hi": [2, 2]},
    "obstacles": [{"type": "rect", "center": [1, 1], "half_extents": [0.1, 0.2]},
                  {"type": "circle", "center": [0.5, 0.5], "radius": 0.1}],
    "q_start": [0.1, 0.1], "q_goal": [1.9, 1.9], "label": "x"})", "t");
  const QueryInstance query = io::QueryFromJson(j);
  ASSERT_EQ(query.world.Obstacles().size(), 2u);
  EXPECT_TRUE(std::holds_alternative<geometry::Circle>(query.world.Obstacles()[1]));
  auto bad = j;
  bad["obstacles"][0]["type"] = "triangle";
  EXPECT_EQ(CodeOf([&] { io::QueryFromJson(bad); }), ErrorCode::MalformedInput);
}

TEST(LibraryIo, OrderPreservedAndFilesByteStable)
{
  ExperienceLibrary library;
  library.Append(PathOf({Q({0, 0}), Q({1, 1})}));
  library.Append(PathOf({Q({0, 1}), Q({0.3, 0.4}), Q({1, 0})}));
  const fs::path dir = TempDir("lib");
  io::SaveLibrary(dir / "a", library);
  io::SaveLibrary(dir / "b", library);
  const ExperienceLibrary loaded = io::LoadLibrary(dir / "a");
  ASSERT_EQ(loaded.Size(), 2u);
  EXPECT_EQ(loaded[0], library[0]);
  EXPECT_EQ(loaded[1], library[1]);
  for (const auto& entry : fs::directory_iterator(dir / "a"))
  {
    EXPECT_EQ(io::ReadFile(entry.path()), io::ReadFile(dir / "b" / entry.path().filename()));
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
}

TEST(ParamsIo, MirrorsFieldsAndRejectsUnknown)
{
  const auto params = io::ParamsFromJson(io::ParseJson(
      R"({"p": 0.1, "omega_min": 0.02, "omega_max": 0.2, "epsilon": 3, "delta": 0.01, "seed": 9})", "t"));
  EXPECT_EQ(params.p, 0.1);
  EXPECT_EQ(params.EpsilonFor(2), Q({3, 3}));
  EXPECT_EQ(*params.delta, 0.01);
  EXPECT_EQ(params.seed, 9u);
  const auto round = io::ParamsFromJson(io::ParamsToJson(params));
  EXPECT_EQ(io::ParamsToJson(round), io::ParamsToJson(params));
  EXPECT_EQ(CodeOf([] { io::ParamsFromJson(io::ParseJson(R"({"bogus": 1})", "t")); }),
            ErrorCode::MalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParamsFromJson(io::ParseJson(R"({"omega_min": 0.5, "omega_max": 0.1})", "t")); }),
            ErrorCode::InvalidArgument);
}

TEST(ResultIo, StatusPathStats)
{
  const QueryInstance query{World::Point2d(Vec2(0, 0), Vec2(2, 2), {}), Q({0.2, 0.2}), Q({1.8, 1.8}), "q"};
  PlannerParams params;
  params.keep_trees = true;
  const PlanResult result = ErtPlan(query, PathOf({Q({0, 0}), Q({1, 1})}), params);
  const auto j = io::ResultToJson(result);
  EXPECT_EQ(j.at("status"), "solved");
  EXPECT_EQ(j.at("stats").at("solved_by"), "prior_valid");
  EXPECT_EQ(io::PathFromJson(j.at("path")), *result.path);
  const io::StoredResult stored = io::ResultFromJson(j);
  EXPECT_EQ(*stored.path, *result.path);
}

TEST(Svg, LayeredGroupsForArmAndPoint)
{
  for (const auto robot : {bench::RobotKind::Point2d, bench::RobotKind::PlanarArm})
  {
    const auto suite = bench::GenerateScenarios(bench::ScenarioSpec::ForSet(2, 1, 3, robot));
    PlannerParams params;
    params.keep_trees = true;
    const auto& query = suite[0];
    const PathExperience prior = PhaseParametrize(std::vector<Configuration>{query.q_start, query.q_goal});
    const PlanResult result = ErtConnectPlan(query, prior, params);
    io::Scene scene;
    scene.query = &query;
    scene.tree_edges = result.tree_edges;
    scene.prior = result.mapped_prior;
    scene.solution = result.path;
    const std::string svg = io::RenderSvg(scene);
    for (const char* group : {"obstacles", "trees", "prior", "solution", "endpoints"})
    {
      EXPECT_NE(svg.find(std::string("<g id=\"") + group + "\""), std::string::npos) << group;
    }
    EXPECT_EQ(svg.find("nan"), std::string::npos);
  }
}
