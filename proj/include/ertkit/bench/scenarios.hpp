#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/experience.hpp>
#include <ertkit/planners/rrtconnect.hpp>
#include <ertkit/rng.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit::bench
{
/// Shelf cross-section: horizontal slabs with an open front, a back wall,
/// and tiers numbered from the bottom.
struct ShelfTemplate
{
  int tiers = 4;
  double tier_pitch = 0.4;
  double slab_thickness = 0.04;
  double depth = 0.8;
  double back_thickness = 0.05;
  double front_x = 1.0;
  double bottom_y = 0.2;
  /// Tiers that may hold the target.
  std::vector<int> target_tiers{2};
  int min_obstacles = 0;
  int max_obstacles = 0;
  /// Obstacle height as a fraction of the tier's clear height.
  double min_obstacle_fraction = 0.3;
  double max_obstacle_fraction = 0.6;
  /// Uniform +/- jitter of the robot start and of the whole shelf.
  double start_jitter = 0.1;
  double shelf_jitter = 0.0;
};

enum class RobotKind
{
  Point2d,
  PlanarArm
};

struct ScenarioSpec
{
  int set_id = 1;
  int count = 100;
  uint64_t seed = 0;
  RobotKind robot = RobotKind::Point2d;
  ShelfTemplate shelf;

  /// Template of one of the four dissimilarity tiers: (1) middle-tier
  /// targets, empty shelf; (2) plus obstacles; (3) plus targets on three
  /// tiers; (4) narrower five-tier shelf, obstacles and shelf pose jitter.
  static ScenarioSpec ForSet(const int set_id, const int count, const uint64_t seed,
                             const RobotKind robot = RobotKind::Point2d)
  {
    ScenarioSpec spec;
    spec.set_id = set_id;
    spec.count = count;
    spec.seed = seed;
    spec.robot = robot;
    ShelfTemplate& shelf = spec.shelf;
    if (robot == RobotKind::PlanarArm)
    {
      shelf.tier_pitch = 0.36;
      shelf.depth = 0.6;
      shelf.front_x = 0.8;
      shelf.bottom_y = -0.72;
      shelf.slab_thickness = 0.03;
      shelf.max_obstacle_fraction = 0.45;
      shelf.start_jitter = 0.15;
    }
    switch (set_id)
    {
      case 1:
        break;
      case 2:
        shelf.min_obstacles = 1;
        shelf.max_obstacles = 3;
        break;
      case 3:
        shelf.min_obstacles = 1;
        shelf.max_obstacles = 3;
        shelf.target_tiers = {1, 2, 3};
        break;
      case 4:
        shelf.tiers = 5;
        shelf.tier_pitch *= 0.8;
        shelf.depth *= robot == RobotKind::PlanarArm ? 1.0 : 0.85;
        shelf.bottom_y += robot == RobotKind::PlanarArm ? 0.0 : 0.04;
        shelf.min_obstacles = 1;
        shelf.max_obstacles = 3;
        shelf.shelf_jitter = 0.08;
        break;
      default:
        Throw(ErrorCode::InvalidArgument, "scenario set must be 1..4");
    }
    return spec;
  }
};

struct ShelfLayout
{
  double front_x = 0.0;
  double bottom_y = 0.0;
  std::vector<Obstacle> structure;
};

inline double ClearHeight(const ShelfTemplate& shelf)
{
  return shelf.tier_pitch - shelf.slab_thickness;
}

/// Lower and upper y of a tier's free space.
inline std::pair<double, double> TierSpan(const ShelfTemplate& shelf, const double bottom_y,
                                          const int tier)
{
  const double floor = bottom_y + tier * shelf.tier_pitch + 0.5 * shelf.slab_thickness;
  return {floor, floor + ClearHeight(shelf)};
}

inline ShelfLayout BuildShelf(const ShelfTemplate& shelf, const double front_x,
                              const double bottom_y)
{
  ShelfLayout layout;
  layout.front_x = front_x;
  layout.bottom_y = bottom_y;
  const double half_depth = 0.5 * shelf.depth;
  for (int k = 0; k <= shelf.tiers; k++)
  {
    layout.structure.push_back(geometry::Rect{
        Vec2(front_x + half_depth, bottom_y + k * shelf.tier_pitch),
        Vec2(half_depth, 0.5 * shelf.slab_thickness)});
  }
  const double height = shelf.tiers * shelf.tier_pitch;
  layout.structure.push_back(geometry::Rect{
      Vec2(front_x + shelf.depth + 0.5 * shelf.back_thickness, bottom_y + 0.5 * height),
      Vec2(0.5 * shelf.back_thickness, 0.5 * (height + shelf.slab_thickness))});
  return layout;
}

/// Flood fill over a grid of cells whose centers clear every obstacle by
/// more than half a cell diagonal. A positive answer certifies a free
/// corridor between start and goal for the point robot.
inline bool Point2dConnected(const World& world, const Configuration& start,
                             const Configuration& goal, const double cell)
{
  const Vec2 lo(world.Lower()[0], world.Lower()[1]);
  const Vec2 hi(world.Upper()[0], world.Upper()[1]);
  const int nx = static_cast<int>(std::floor((hi.x() - lo.x()) / cell));
  const int ny = static_cast<int>(std::floor((hi.y() - lo.y()) / cell));
  const double reach = cell * std::numbers::sqrt2;
  const auto center = [&](const int ix, const int iy) {
    Configuration q(2);
    q << lo.x() + (ix + 0.5) * cell, lo.y() + (iy + 0.5) * cell;
    return q;
  };
  const auto free_cell = [&](const int ix, const int iy) {
    return Clearance(world, center(ix, iy)) > reach;
  };
  // Start and goal must each see their own cell center along a free edge.
  const auto cell_of = [&](const Configuration& q) {
    return std::pair<int, int>{std::clamp(static_cast<int>((q[0] - lo.x()) / cell), 0, nx - 1),
                               std::clamp(static_cast<int>((q[1] - lo.y()) / cell), 0, ny - 1)};
  };
  const auto [sx, sy] = cell_of(start);
  const auto [gx, gy] = cell_of(goal);
  MotionValidator validator(world, 0.25 * cell, true);
  if (!free_cell(sx, sy) || !free_cell(gx, gy) || !validator.EdgeValid(start, center(sx, sy))
      || !validator.EdgeValid(goal, center(gx, gy)))
  {
    return false;
  }
  std::vector<char> seen(static_cast<size_t>(nx) * static_cast<size_t>(ny), 0);
  std::deque<std::pair<int, int>> frontier{{sx, sy}};
  seen[static_cast<size_t>(sy) * nx + sx] = 1;
  while (!frontier.empty())
  {
    const auto [x, y] = frontier.front();
    frontier.pop_front();
    if (x == gx && y == gy)
    {
      return true;
    }
    constexpr int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& step : kSteps)
    {
      const int ax = x + step[0];
      const int ay = y + step[1];
      if (ax < 0 || ay < 0 || ax >= nx || ay >= ny)
      {
        continue;
      }
      char& mark = seen[static_cast<size_t>(ay) * nx + ax];
      if (!mark)
      {
        mark = 1;
        if (free_cell(ax, ay))
        {
          frontier.emplace_back(ax, ay);
        }
      }
    }
  }
  return false;
}

namespace detail
{
constexpr std::array<double, 4> kArmLinks{0.5, 0.45, 0.4, 0.35};

/// Objects standing on the tier floor or hanging from its ceiling, placed
/// at increasing depth before the target.
inline std::vector<Obstacle> TierObstacles(const ShelfTemplate& shelf, const ShelfLayout& layout,
                                           const int tier, const double target_x,
                                           const bool allow_hanging, Rng& rng)
{
  std::vector<Obstacle> obstacles;
  const int count = static_cast<int>(rng.UniformInt(shelf.min_obstacles, shelf.max_obstacles));
  if (count == 0)
  {
    return obstacles;
  }
  const auto [floor, ceiling] = TierSpan(shelf, layout.bottom_y, tier);
  const double clear = ceiling - floor;
  const double x_lo = layout.front_x + 0.1 * shelf.depth;
  const double x_hi = target_x - 0.06;
  const double lane = (x_hi - x_lo) / count;
  if (!(lane > 0.05))
  {
    Throw(ErrorCode::TemplateInfeasible, "no room for obstacles before the target");
  }
  for (int i = 0; i < count; i++)
  {
    const double width = rng.Uniform(0.5, 1.0) * std::min(0.1, 0.6 * lane);
    const double x = x_lo + (i + 0.5) * lane
                   + rng.Uniform(-0.5, 0.5) * std::max(0.0, lane - width - 0.03);
    const double height = clear * rng.Uniform(shelf.min_obstacle_fraction,
                                              shelf.max_obstacle_fraction);
    const bool hanging = allow_hanging && rng.Bernoulli(0.5);
    const bool round = rng.Bernoulli(0.3);
    const double base_y = hanging ? ceiling : floor;
    const double sign = hanging ? -1.0 : 1.0;
    if (round)
    {
      const double radius = 0.5 * std::min(height, 2.0 * width);
      obstacles.push_back(geometry::Circle{Vec2(x, base_y + sign * radius), radius});
    }
    else
    {
      obstacles.push_back(geometry::Rect{Vec2(x, base_y + sign * 0.5 * height),
                                         Vec2(0.5 * width, 0.5 * height)});
    }
  }
  return obstacles;
}

inline std::optional<QueryInstance> Point2dInstance(const ScenarioSpec& spec, const ShelfLayout& layout,
                                                    const int tier, Rng& rng)
{
  const ShelfTemplate& shelf = spec.shelf;
  const auto [floor, ceiling] = TierSpan(shelf, layout.bottom_y, tier);
  const double clear = ceiling - floor;
  Configuration goal(2);
  goal << layout.front_x + shelf.depth * rng.Uniform(0.65, 0.9),
      floor + clear * rng.Uniform(0.3, 0.7);
  const auto [mid_floor, mid_ceiling] = TierSpan(shelf, layout.bottom_y, shelf.tiers / 2);
  Configuration start(2);
  start << 0.25 + rng.Uniform(-1.0, 1.0) * shelf.start_jitter,
      0.5 * (mid_floor + mid_ceiling) + rng.Uniform(-1.0, 1.0) * shelf.start_jitter;

  std::vector<Obstacle> obstacles = layout.structure;
  for (auto& obstacle : TierObstacles(shelf, layout, tier, goal[0], true, rng))
  {
    obstacles.push_back(obstacle);
  }
  QueryInstance query{World::Point2d(Vec2(0.0, 0.0), Vec2(2.0, 2.0), std::move(obstacles)),
                      start, goal, ""};
  if (!ValidateQuery(query) || !Point2dConnected(query.world, start, goal, 0.01))
  {
    return std::nullopt;
  }
  return query;
}

/// Arm configuration whose last two links run roughly horizontally into
/// the tier with the tip near the requested point; rejection-sampled.
inline std::optional<Configuration> ArmReach(const World& world, const Vec2& tip_lo,
                                             const Vec2& tip_hi, Rng& rng)
{
  const auto& links = world.LinkLengths();
  for (int attempt = 0; attempt < 4000; attempt++)
  {
    const double a0 = rng.Uniform(-1.2, 1.2);
    const double a1 = rng.Uniform(-1.2, 1.2);
    const double a2 = rng.Uniform(-0.25, 0.25);
    const double a3 = rng.Uniform(-0.2, 0.2);
    const std::array<double, 4> absolute{a0, a1, a2, a3};
    Vec2 tip = world.Base();
    for (size_t i = 0; i < 4; i++)
    {
      tip += links[i] * Vec2(std::cos(absolute[i]), std::sin(absolute[i]));
    }
    if (tip.x() < tip_lo.x() || tip.x() > tip_hi.x() || tip.y() < tip_lo.y()
        || tip.y() > tip_hi.y())
    {
      continue;
    }
    Configuration q(4);
    q << a0, a1 - a0, a2 - a1, a3 - a2;
    if (world.InBounds(q) && IsValidState(world, q))
    {
      return q;
    }
  }
  return std::nullopt;
}

inline std::optional<QueryInstance> ArmInstance(const ScenarioSpec& spec, const ShelfLayout& layout,
                                                const int tier, Rng& rng)
{
  const ShelfTemplate& shelf = spec.shelf;
  const auto [floor, ceiling] = TierSpan(shelf, layout.bottom_y, tier);
  const double clear = ceiling - floor;
  const Vec2 tip_lo(layout.front_x + 0.55 * shelf.depth, floor + 0.55 * clear);
  const Vec2 tip_hi(layout.front_x + 0.85 * shelf.depth, floor + 0.8 * clear);

  std::vector<Obstacle> obstacles = layout.structure;
  for (auto& obstacle : TierObstacles(shelf, layout, tier, tip_lo.x(), false, rng))
  {
    obstacles.push_back(obstacle);
  }
  World world = World::PlanarArm({kArmLinks.begin(), kArmLinks.end()}, Vec2(0.0, 0.0),
                                 std::move(obstacles));
  const auto goal = ArmReach(world, tip_lo, tip_hi, rng);
  if (!goal)
  {
    return std::nullopt;
  }
  // Tucked pose: upper arm down and back, forearm folded up.
  Configuration start(4);
  start << -2.2, 2.4, 1.6, 0.6;
  for (long i = 0; i < start.size(); i++)
  {
    start[i] += rng.Uniform(-1.0, 1.0) * shelf.start_jitter;
  }
  QueryInstance query{std::move(world), start, *goal, ""};
  if (!ValidateQuery(query))
  {
    return std::nullopt;
  }
  return query;
}

inline void CheckTemplate(const ScenarioSpec& spec)
{
  const ShelfTemplate& shelf = spec.shelf;
  if (spec.count <= 0)
  {
    Throw(ErrorCode::InvalidArgument, "scenario count must be > 0");
  }
  if (shelf.tiers < 1 || shelf.target_tiers.empty() || shelf.min_obstacles < 0
      || shelf.max_obstacles < shelf.min_obstacles)
  {
    Throw(ErrorCode::InvalidArgument, "malformed shelf template");
  }
  for (const int tier : shelf.target_tiers)
  {
    if (tier < 0 || tier >= shelf.tiers)
    {
      Throw(ErrorCode::InvalidArgument, "target tier outside the shelf");
    }
  }
  if (!std::isfinite(shelf.start_jitter) || !std::isfinite(shelf.shelf_jitter)
      || shelf.start_jitter < 0.0 || shelf.shelf_jitter < 0.0)
  {
    Throw(ErrorCode::InvalidArgument, "jitter ranges must be finite and >= 0");
  }
  // The tier opening must be several check-resolution steps tall.
  const double delta = spec.robot == RobotKind::Point2d ? 0.01 * std::sqrt(8.0)
                                                        : 0.01 * 2.0 * std::numbers::pi * 2.0;
  const double clear_needed = spec.robot == RobotKind::Point2d ? 3.0 * delta : 0.15;
  if (ClearHeight(shelf) < clear_needed || shelf.slab_thickness <= 0.0
      || shelf.min_obstacle_fraction <= 0.0 || shelf.max_obstacle_fraction >= 0.9
      || shelf.min_obstacle_fraction > shelf.max_obstacle_fraction)
  {
    Throw(ErrorCode::TemplateInfeasible, "tier opening too narrow for the check resolution");
  }
}
}  // namespace detail

/// Deterministic in spec.seed. Instances are labelled "set<k>/<index>".
inline std::vector<QueryInstance> GenerateScenarios(const ScenarioSpec& spec)
{
  detail::CheckTemplate(spec);
  const ShelfTemplate& shelf = spec.shelf;
  std::vector<QueryInstance> instances;
  instances.reserve(static_cast<size_t>(spec.count));
  for (int index = 0; index < spec.count; index++)
  {
    Rng rng(DeriveSeed(spec.seed, {static_cast<uint64_t>(spec.set_id),
                                   static_cast<uint64_t>(index)}));
    std::optional<QueryInstance> instance;
    for (int attempt = 0; attempt < 200 && !instance; attempt++)
    {
      const double front_x = shelf.front_x + rng.Uniform(-1.0, 1.0) * shelf.shelf_jitter;
      const double bottom_y = shelf.bottom_y + rng.Uniform(-1.0, 1.0) * shelf.shelf_jitter;
      const ShelfLayout layout = BuildShelf(shelf, front_x, bottom_y);
      const int tier = shelf.target_tiers[static_cast<size_t>(
          rng.UniformInt(0, static_cast<int64_t>(shelf.target_tiers.size()) - 1))];
      instance = spec.robot == RobotKind::Point2d
                     ? detail::Point2dInstance(spec, layout, tier, rng)
                     : detail::ArmInstance(spec, layout, tier, rng);
      if (instance)
      {
        instance->label = "set" + std::to_string(spec.set_id) + "/" + std::to_string(index)
                        + "/tier" + std::to_string(tier);
      }
    }
    if (!instance)
    {
      Throw(ErrorCode::TemplateInfeasible,
            "could not place a valid instance " + std::to_string(index));
    }
    instances.push_back(std::move(*instance));
  }
  return instances;
}

/// Extracts the tier index encoded in an instance label ("set2/7/tier3").
inline std::optional<int> TierOfLabel(const std::string& label)
{
  const auto pos = label.rfind("/tier");
  if (pos == std::string::npos)
  {
    return std::nullopt;
  }
  return std::stoi(label.substr(pos + 5));
}

struct LibraryBuild
{
  ExperienceLibrary library;
  std::vector<QueryInstance> generators;
};

/// Solves `count` obstacle-free middle-tier instances with RRTConnect and
/// keeps the paths. The generator seed stream is disjoint from the
/// evaluation suites (set id 0).
inline LibraryBuild BuildExperienceLibrary(const int count, const uint64_t seed,
                                           const RobotKind robot,
                                           PlannerParams params = {})
{
  ScenarioSpec spec = ScenarioSpec::ForSet(1, count, seed, robot);
  spec.set_id = 0;
  LibraryBuild build;
  build.generators = GenerateScenarios(spec);
  for (size_t idx = 0; idx < build.generators.size(); idx++)
  {
    params.seed = DeriveSeed(seed, {0xE4E4ULL, idx});
    const PlanResult result = RrtConnectPlan(build.generators[idx], params);
    if (!result.Solved())
    {
      Throw(ErrorCode::GenerationFailed,
            "experience generator " + std::to_string(idx) + " unsolved");
    }
    build.library.Append(*result.path);
  }
  return build;
}
}  // namespace ertkit::bench
