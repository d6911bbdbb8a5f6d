#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/experience.hpp>
#include <ertkit/planners/plan_result.hpp>
#include <ertkit/planners/segment.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit::io
{
using nlohmann::json;
namespace fs = std::filesystem;

/// Writes to a sibling temp file and renames it over the target.
inline void WriteAtomically(const fs::path& target, const std::string& content)
{
  if (target.has_parent_path())
  {
    fs::create_directories(target.parent_path());
  }
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      Throw(ErrorCode::MalformedInput, "cannot write " + temp.string());
    }
    out << content;
    out.flush();
    if (!out)
    {
      Throw(ErrorCode::MalformedInput, "write failed for " + temp.string());
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec)
  {
    fs::remove(temp);
    Throw(ErrorCode::MalformedInput, "cannot rename onto " + target.string() + ": " + ec.message());
  }
}

inline std::string ReadFile(const fs::path& source)
{
  std::ifstream in(source, std::ios::binary);
  if (!in)
  {
    Throw(ErrorCode::MalformedInput, "cannot read " + source.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline json ParseJson(const std::string& text, const std::string& what)
{
  try
  {
    return json::parse(text);
  }
  catch (const json::exception& e)
  {
    Throw(ErrorCode::MalformedInput, what + ": " + e.what());
  }
}

inline json ReadJson(const fs::path& source)
{
  return ParseJson(ReadFile(source), source.string());
}

inline std::string Dump(const json& document)
{
  return document.dump(2) + "\n";
}

namespace detail
{
/// Runs a conversion and reports any JSON type or key error as malformed input.
template<typename Fn>
auto Guarded(const std::string& what, Fn&& fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (const json::exception& e)
  {
    Throw(ErrorCode::MalformedInput, what + ": " + e.what());
  }
}

inline json VectorJson(const Eigen::VectorXd& v)
{
  json out = json::array();
  for (long i = 0; i < v.size(); i++)
  {
    out.push_back(v[i]);
  }
  return out;
}

inline Eigen::VectorXd VectorFrom(const json& j)
{
  if (!j.is_array())
  {
    Throw(ErrorCode::MalformedInput, "expected a number array");
  }
  Eigen::VectorXd v(static_cast<long>(j.size()));
  for (size_t i = 0; i < j.size(); i++)
  {
    if (!j[i].is_number())
    {
      Throw(ErrorCode::MalformedInput, "expected a number array");
    }
    v[static_cast<long>(i)] = j[i].get<double>();
  }
  return v;
}

inline Vec2 Vec2From(const json& j)
{
  const Eigen::VectorXd v = VectorFrom(j);
  if (v.size() != 2)
  {
    Throw(ErrorCode::MalformedInput, "expected a 2-vector");
  }
  return Vec2(v[0], v[1]);
}

inline json Vec2Json(const Vec2& v)
{
  return json::array({v.x(), v.y()});
}
}  // namespace detail

// Paths: {"dimension": n, "waypoints": [[...], ...]}; phases are recomputed.

inline json PathToJson(const PathExperience& path)
{
  json waypoints = json::array();
  for (const auto& state : path.States())
  {
    waypoints.push_back(detail::VectorJson(state.q));
  }
  return {{"dimension", path.Dimension()}, {"waypoints", std::move(waypoints)}};
}

inline PathExperience PathFromJson(const json& j)
{
  return detail::Guarded("path", [&] {
    const long dimension = j.at("dimension").get<long>();
    std::vector<Configuration> waypoints;
    for (const auto& row : j.at("waypoints"))
    {
      waypoints.push_back(detail::VectorFrom(row));
      CheckDimensions(dimension, waypoints.back().size(), "path file");
    }
    return PhaseParametrize(waypoints);
  });
}

inline void SavePath(const fs::path& target, const PathExperience& path)
{
  WriteAtomically(target, Dump(PathToJson(path)));
}

inline PathExperience LoadPath(const fs::path& source)
{
  return PathFromJson(ReadJson(source));
}

// Worlds and scenarios.

inline json ObstacleToJson(const Obstacle& obstacle)
{
  if (const auto* rect = std::get_if<geometry::Rect>(&obstacle))
  {
    return {{"type", "rect"},
            {"center", detail::Vec2Json(rect->center)},
            {"half_extents", detail::Vec2Json(rect->half_extents)}};
  }
  const auto& circle = std::get<geometry::Circle>(obstacle);
  return {{"type", "circle"}, {"center", detail::Vec2Json(circle.center)}, {"radius", circle.radius}};
}

inline Obstacle ObstacleFromJson(const json& j)
{
  const std::string type = j.at("type").get<std::string>();
  if (type == "rect")
  {
    return geometry::Rect{detail::Vec2From(j.at("center")), detail::Vec2From(j.at("half_extents"))};
  }
  if (type == "circle")
  {
    return geometry::Circle{detail::Vec2From(j.at("center")), j.at("radius").get<double>()};
  }
  Throw(ErrorCode::MalformedInput, "unknown obstacle type '" + type + "'");
}

inline json QueryToJson(const QueryInstance& query)
{
  const World& world = query.world;
  json obstacles = json::array();
  for (const auto& obstacle : world.Obstacles())
  {
    obstacles.push_back(ObstacleToJson(obstacle));
  }
  json j = {{"kind", ToString(world.Kind())},
            {"bounds", {{"lo", detail::VectorJson(world.Lower())},
                        {"hi", detail::VectorJson(world.Upper())}}},
            {"obstacles", std::move(obstacles)}};
  if (world.Kind() == WorldKind::PlanarArm)
  {
    j["link_lengths"] = world.LinkLengths();
    j["base"] = detail::Vec2Json(world.Base());
  }
  j["q_start"] = detail::VectorJson(query.q_start);
  j["q_goal"] = detail::VectorJson(query.q_goal);
  j["label"] = query.label;
  return j;
}

inline QueryInstance QueryFromJson(const json& j)
{
  return detail::Guarded("scenario", [&] {
    const std::string kind = j.at("kind").get<std::string>();
    const Eigen::VectorXd lo = detail::VectorFrom(j.at("bounds").at("lo"));
    const Eigen::VectorXd hi = detail::VectorFrom(j.at("bounds").at("hi"));
    std::vector<Obstacle> obstacles;
    for (const auto& shape : j.at("obstacles"))
    {
      obstacles.push_back(ObstacleFromJson(shape));
    }
    QueryInstance query;
    if (kind == "point2d")
    {
      if (lo.size() != 2 || hi.size() != 2)
      {
        Throw(ErrorCode::MalformedInput, "point2d bounds must be 2-dimensional");
      }
      query.world = World::Point2d(Vec2(lo[0], lo[1]), Vec2(hi[0], hi[1]), std::move(obstacles));
    }
    else if (kind == "planar_arm")
    {
      query.world = World::PlanarArm(j.at("link_lengths").get<std::vector<double>>(),
                                     detail::Vec2From(j.at("base")), std::move(obstacles), lo, hi);
    }
    else
    {
      Throw(ErrorCode::MalformedInput, "unknown world kind '" + kind + "'");
    }
    query.q_start = detail::VectorFrom(j.at("q_start"));
    query.q_goal = detail::VectorFrom(j.at("q_goal"));
    query.label = j.value("label", "");
    return query;
  });
}

inline json SuiteToJson(const std::vector<QueryInstance>& suite)
{
  json j = json::array();
  for (const auto& query : suite)
  {
    j.push_back(QueryToJson(query));
  }
  return j;
}

/// Accepts a suite array or a single scenario object.
inline std::vector<QueryInstance> SuiteFromJson(const json& j)
{
  std::vector<QueryInstance> suite;
  if (j.is_array())
  {
    for (const auto& item : j)
    {
      suite.push_back(QueryFromJson(item));
    }
  }
  else
  {
    suite.push_back(QueryFromJson(j));
  }
  return suite;
}

inline void SaveSuite(const fs::path& target, const std::vector<QueryInstance>& suite)
{
  WriteAtomically(target, Dump(SuiteToJson(suite)));
}

inline std::vector<QueryInstance> LoadSuite(const fs::path& source)
{
  return SuiteFromJson(ReadJson(source));
}

// Libraries: a directory with index.json {"experiences": [file, ...]}.

inline constexpr const char* kLibraryIndex = "index.json";

inline void SaveLibrary(const fs::path& directory, const ExperienceLibrary& library)
{
  fs::create_directories(directory);
  json files = json::array();
  for (size_t idx = 0; idx < library.Size(); idx++)
  {
    std::ostringstream name;
    name << "experience_" << std::setw(4) << std::setfill('0') << idx << ".json";
    SavePath(directory / name.str(), library[idx]);
    files.push_back(name.str());
  }
  WriteAtomically(directory / kLibraryIndex, Dump({{"experiences", std::move(files)}}));
}

inline ExperienceLibrary LoadLibrary(const fs::path& directory)
{
  const json index = ReadJson(directory / kLibraryIndex);
  return detail::Guarded("library index", [&] {
    ExperienceLibrary library;
    for (const auto& name : index.at("experiences"))
    {
      library.Append(LoadPath(directory / name.get<std::string>()));
    }
    return library;
  });
}

// Planner parameters mirror PlannerParams field names; absent fields keep defaults.

inline json ParamsToJson(const PlannerParams& params)
{
  json j = {{"p", params.p},
            {"omega_min", params.omega_min},
            {"omega_max", params.omega_max},
            {"timeout", params.timeout},
            {"max_iterations", params.max_iterations},
            {"seed", params.seed},
            {"enforce_timeout", params.enforce_timeout},
            {"certify_motions", params.certify_motions},
            {"rrt_step_fraction", params.rrt_step_fraction},
            {"keep_trees", params.keep_trees}};
  if (params.epsilon.size() > 0)
  {
    j["epsilon"] = detail::VectorJson(params.epsilon);
  }
  if (params.delta)
  {
    j["delta"] = *params.delta;
  }
  return j;
}

inline PlannerParams ParamsFromJson(const json& j, PlannerParams params = {})
{
  return detail::Guarded("params", [&] {
    if (!j.is_object())
    {
      Throw(ErrorCode::MalformedInput, "params must be a JSON object");
    }
    for (const auto& [key, value] : j.items())
    {
      if (key == "p") params.p = value.get<double>();
      else if (key == "omega_min") params.omega_min = value.get<double>();
      else if (key == "omega_max") params.omega_max = value.get<double>();
      else if (key == "timeout") params.timeout = value.get<double>();
      else if (key == "max_iterations") params.max_iterations = value.get<uint64_t>();
      else if (key == "seed") params.seed = value.get<uint64_t>();
      else if (key == "enforce_timeout") params.enforce_timeout = value.get<bool>();
      else if (key == "certify_motions") params.certify_motions = value.get<bool>();
      else if (key == "rrt_step_fraction") params.rrt_step_fraction = value.get<double>();
      else if (key == "keep_trees") params.keep_trees = value.get<bool>();
      else if (key == "delta")
      {
        params.delta = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      }
      else if (key == "epsilon")
      {
        params.epsilon = value.is_array() ? detail::VectorFrom(value)
                                          : Eigen::VectorXd::Constant(1, value.get<double>());
      }
      else
      {
        Throw(ErrorCode::MalformedInput, "unknown params field '" + key + "'");
      }
    }
    params.Validate();
    return params;
  });
}

inline json StatsToJson(const PlanStats& stats)
{
  return {{"iterations", stats.iterations},
          {"validity_checks", stats.validity_checks},
          {"tree_sizes", stats.tree_sizes},
          {"elapsed_seconds", stats.elapsed_seconds},
          {"solved_by", ToString(stats.solved_by)},
          {"stop_reason", ToString(stats.stop_reason)}};
}

inline json ResultToJson(const PlanResult& result)
{
  json j = {{"status", ToString(result.status)},
            {"path", result.path ? PathToJson(*result.path) : json(nullptr)},
            {"stats", StatsToJson(result.stats)}};
  if (result.mapped_prior)
  {
    j["mapped_prior"] = PathToJson(*result.mapped_prior);
  }
  if (!result.tree_edges.empty())
  {
    json trees = json::array();
    for (const auto& edges : result.tree_edges)
    {
      json tree = json::array();
      for (const auto& polyline : edges)
      {
        json line = json::array();
        for (const auto& q : polyline)
        {
          line.push_back(detail::VectorJson(q));
        }
        tree.push_back(std::move(line));
      }
      trees.push_back(std::move(tree));
    }
    j["tree_edges"] = std::move(trees);
  }
  return j;
}

/// Reads back the drawable parts of a result file.
struct StoredResult
{
  std::string status;
  std::optional<PathExperience> path;
  std::optional<PathExperience> mapped_prior;
  std::vector<std::vector<Polyline>> tree_edges;
};

inline StoredResult ResultFromJson(const json& j)
{
  return detail::Guarded("result", [&] {
    StoredResult stored;
    stored.status = j.at("status").get<std::string>();
    if (j.contains("path") && !j.at("path").is_null())
    {
      stored.path = PathFromJson(j.at("path"));
    }
    if (j.contains("mapped_prior"))
    {
      stored.mapped_prior = PathFromJson(j.at("mapped_prior"));
    }
    if (j.contains("tree_edges"))
    {
      for (const auto& tree : j.at("tree_edges"))
      {
        std::vector<Polyline> edges;
        for (const auto& line : tree)
        {
          Polyline polyline;
          for (const auto& q : line)
          {
            polyline.push_back(detail::VectorFrom(q));
          }
          edges.push_back(std::move(polyline));
        }
        stored.tree_edges.push_back(std::move(edges));
      }
    }
    return stored;
  });
}
}  // namespace ertkit::io
