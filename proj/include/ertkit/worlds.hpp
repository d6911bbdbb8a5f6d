#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/geometry.hpp>

namespace ertkit
{
using geometry::Vec2;

enum class WorldKind
{
  Point2d,
  PlanarArm
};

inline const char* ToString(const WorldKind kind)
{
  return kind == WorldKind::Point2d ? "point2d" : "planar_arm";
}

using Obstacle = std::variant<geometry::Rect, geometry::Circle>;

/// Immutable environment: configuration bounds, workspace obstacles and,
/// for the planar arm, its kinematics. Safe to share across queries.
class World
{
public:
  World() = default;

  static World Point2d(const Vec2& lo, const Vec2& hi,
                       std::vector<Obstacle> obstacles)
  {
    World world;
    world.kind_ = WorldKind::Point2d;
    world.lower_ = lo;
    world.upper_ = hi;
    world.obstacles_ = std::move(obstacles);
    world.Validate();
    return world;
  }

  /// Joint bounds default to [-pi, pi] for every link.
  static World PlanarArm(std::vector<double> link_lengths, const Vec2& base,
                         std::vector<Obstacle> obstacles)
  {
    const long n = static_cast<long>(link_lengths.size());
    return PlanarArm(std::move(link_lengths), base, std::move(obstacles),
                     Eigen::VectorXd::Constant(n, -std::numbers::pi),
                     Eigen::VectorXd::Constant(n, std::numbers::pi));
  }

  static World PlanarArm(std::vector<double> link_lengths, const Vec2& base,
                         std::vector<Obstacle> obstacles,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi)
  {
    World world;
    world.kind_ = WorldKind::PlanarArm;
    world.link_lengths_ = std::move(link_lengths);
    world.base_ = base;
    world.lower_ = lo;
    world.upper_ = hi;
    world.obstacles_ = std::move(obstacles);
    world.Validate();
    return world;
  }

  WorldKind Kind() const { return kind_; }
  long Dimension() const { return lower_.size(); }
  const Eigen::VectorXd& Lower() const { return lower_; }
  const Eigen::VectorXd& Upper() const { return upper_; }
  const std::vector<Obstacle>& Obstacles() const { return obstacles_; }
  const std::vector<double>& LinkLengths() const { return link_lengths_; }
  const Vec2& Base() const { return base_; }

  /// Diameter of the configuration-space bounding box.
  double Diameter() const { return (upper_ - lower_).norm(); }

  /// Default validity-check resolution: 1% of the bounding-box diameter.
  double DefaultDelta() const { return 0.01 * Diameter(); }

  double TotalReach() const
  {
    double reach = 0.0;
    for (const double length : link_lengths_)
    {
      reach += length;
    }
    return reach;
  }

  bool InBounds(const Configuration& q) const
  {
    return (q.array() >= lower_.array()).all()
        && (q.array() <= upper_.array()).all();
  }

  bool operator==(const World& other) const;

private:
  void Validate() const
  {
    if (lower_.size() < 1 || lower_.size() != upper_.size())
    {
      Throw(ErrorCode::InvalidArgument, "world bounds malformed");
    }
    for (long i = 0; i < lower_.size(); i++)
    {
      if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i])
          || !std::isfinite(upper_[i]))
      {
        Throw(ErrorCode::InvalidArgument, "world bounds need lo < hi");
      }
    }
    if (kind_ == WorldKind::Point2d && lower_.size() != 2)
    {
      Throw(ErrorCode::InvalidArgument, "point2d worlds are 2-dimensional");
    }
    if (kind_ == WorldKind::PlanarArm)
    {
      if (static_cast<long>(link_lengths_.size()) != lower_.size())
      {
        Throw(ErrorCode::InvalidArgument, "arm dimension must equal link count");
      }
      for (const double length : link_lengths_)
      {
        if (!(length > 0.0) || !std::isfinite(length))
        {
          Throw(ErrorCode::InvalidArgument, "link lengths must be positive");
        }
      }
      for (long i = 0; i < lower_.size(); i++)
      {
        if (lower_[i] < -std::numbers::pi || upper_[i] > std::numbers::pi)
        {
          Throw(ErrorCode::InvalidArgument, "joint bounds must lie in [-pi, pi]");
        }
      }
    }
    for (const auto& obstacle : obstacles_)
    {
      if (const auto* rect = std::get_if<geometry::Rect>(&obstacle))
      {
        if (!(rect->half_extents.x() > 0.0) || !(rect->half_extents.y() > 0.0))
        {
          Throw(ErrorCode::InvalidArgument, "rectangle half-extents must be > 0");
        }
      }
      else if (!(std::get<geometry::Circle>(obstacle).radius > 0.0))
      {
        Throw(ErrorCode::InvalidArgument, "circle radius must be > 0");
      }
    }
  }

  WorldKind kind_ = WorldKind::Point2d;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::vector<Obstacle> obstacles_;
  std::vector<double> link_lengths_;
  Vec2 base_ = Vec2::Zero();
};

inline bool World::operator==(const World& other) const
{
  return kind_ == other.kind_ && lower_ == other.lower_
      && upper_ == other.upper_ && obstacles_ == other.obstacles_
      && link_lengths_ == other.link_lengths_ && base_ == other.base_;
}

/// A planning query. Start and goal validity is checked by ValidateQuery.
struct QueryInstance
{
  World world;
  Configuration q_start;
  Configuration q_goal;
  std::string label;
};

/// Link segments of the planar arm; joint i's absolute angle is the
/// cumulative sum q[0..i].
inline std::vector<geometry::Segment2> ArmFk(const World& world,
                                             const Configuration& q)
{
  if (world.Kind() != WorldKind::PlanarArm)
  {
    Throw(ErrorCode::InvalidArgument, "ArmFk on a non-arm world");
  }
  CheckDimensions(world.Dimension(), q.size(), "ArmFk");
  std::vector<geometry::Segment2> links;
  links.reserve(static_cast<size_t>(q.size()));
  Vec2 joint = world.Base();
  double angle = 0.0;
  for (long i = 0; i < q.size(); i++)
  {
    angle += q[i];
    const double length = world.LinkLengths()[static_cast<size_t>(i)];
    const Vec2 next = joint + length * Vec2(std::cos(angle), std::sin(angle));
    links.push_back({joint, next});
    joint = next;
  }
  return links;
}

/// Workspace point that represents the robot's "tool": the point itself
/// for point2d, the arm tip otherwise.
inline Vec2 ToolPoint(const World& world, const Configuration& q)
{
  if (world.Kind() == WorldKind::Point2d)
  {
    return Vec2(q[0], q[1]);
  }
  return ArmFk(world, q).back().b;
}

namespace detail
{
inline bool PointCollides(const Vec2& p, const Obstacle& obstacle)
{
  return std::visit([&](const auto& shape) { return geometry::SignedDistance(shape, p) <= 0.0; },
                    obstacle);
}

inline bool LinkCollides(const geometry::Segment2& link, const Obstacle& obstacle)
{
  return std::visit([&](const auto& shape) { return geometry::Intersects(link, shape); },
                    obstacle);
}
}  // namespace detail

/// True iff q lies within bounds and the robot at q touches no obstacle.
inline bool IsValidState(const World& world, const Configuration& q)
{
  CheckDimensions(world.Dimension(), q.size(), "IsValidState");
  if (!q.allFinite() || !world.InBounds(q))
  {
    return false;
  }
  if (world.Kind() == WorldKind::Point2d)
  {
    const Vec2 p(q[0], q[1]);
    for (const auto& obstacle : world.Obstacles())
    {
      if (detail::PointCollides(p, obstacle))
      {
        return false;
      }
    }
    return true;
  }
  for (const auto& link : ArmFk(world, q))
  {
    for (const auto& obstacle : world.Obstacles())
    {
      if (detail::LinkCollides(link, obstacle))
      {
        return false;
      }
    }
  }
  return true;
}

/// Workspace distance between the robot at q and the nearest obstacle;
/// zero or negative when in collision, +inf in an empty world.
inline double Clearance(const World& world, const Configuration& q)
{
  double best = std::numeric_limits<double>::infinity();
  if (world.Kind() == WorldKind::Point2d)
  {
    const Vec2 p(q[0], q[1]);
    for (const auto& obstacle : world.Obstacles())
    {
      best = std::min(best, std::visit(
          [&](const auto& shape) { return geometry::SignedDistance(shape, p); }, obstacle));
    }
    return best;
  }
  for (const auto& link : ArmFk(world, q))
  {
    for (const auto& obstacle : world.Obstacles())
    {
      best = std::min(best, std::visit(
          [&](const auto& shape) { return geometry::Distance(link, shape); }, obstacle));
    }
  }
  return best;
}

/// Upper bound on how far any robot point moves in the workspace along the
/// straight configuration-space edge a -> b.
inline double WorkspaceMotionBound(const World& world, const Configuration& a,
                                   const Configuration& b)
{
  if (world.Kind() == WorldKind::Point2d)
  {
    return (b - a).norm();
  }
  const auto& lengths = world.LinkLengths();
  double bound = 0.0;
  double suffix = world.TotalReach();
  for (long j = 0; j < a.size(); j++)
  {
    bound += std::abs(b[j] - a[j]) * suffix;
    suffix -= lengths[static_cast<size_t>(j)];
  }
  return bound;
}

/// Number of halvings needed so an edge of this length is sampled with
/// spacing <= delta. Power-of-two counts make finer resolutions nest.
inline int SubdivisionLevel(const double length, const double delta)
{
  int level = 0;
  double spacing = length;
  while (spacing > delta && level < 40)
  {
    spacing *= 0.5;
    level++;
  }
  return level;
}

/// Calls visit(q) on every sample of edge a -> b at resolution delta,
/// endpoints included, stopping early when visit returns false.
template<typename Visitor>
bool ForEachEdgeSample(const Configuration& a, const Configuration& b,
                       const double delta, Visitor&& visit)
{
  if (!visit(a) || !visit(b))
  {
    return false;
  }
  const int level = SubdivisionLevel((b - a).norm(), delta);
  const int64_t count = int64_t{1} << level;
  const Configuration step = b - a;
  for (int64_t i = 1; i < count; i++)
  {
    const double t = static_cast<double>(i) / static_cast<double>(count);
    if (!visit(Configuration(a + t * step)))
    {
      return false;
    }
  }
  return true;
}

/// Discretized validity of a waypoint sequence: every sample along every
/// waypoint-to-waypoint edge, spaced at most delta apart, must be valid.
inline bool IsValidWaypoints(const World& world,
                             const std::span<const Configuration> waypoints,
                             const double delta)
{
  if (!(delta > 0.0))
  {
    Throw(ErrorCode::InvalidArgument, "check resolution must be > 0");
  }
  const auto valid = [&](const Configuration& q) { return IsValidState(world, q); };
  if (waypoints.size() == 1)
  {
    return valid(waypoints.front());
  }
  for (size_t idx = 1; idx < waypoints.size(); idx++)
  {
    if (!ForEachEdgeSample(waypoints[idx - 1], waypoints[idx], delta, valid))
    {
      return false;
    }
  }
  return true;
}

inline std::vector<Configuration> ConfigurationsOf(std::span<const PhasedState> states)
{
  std::vector<Configuration> configs;
  configs.reserve(states.size());
  for (const auto& state : states)
  {
    configs.push_back(state.q);
  }
  return configs;
}

inline bool IsValidSegment(const World& world, const MicroSegment& psi,
                           const double delta)
{
  return IsValidWaypoints(world, ConfigurationsOf(psi.States()), delta);
}

inline bool IsValidPath(const World& world, const PathExperience& path,
                        const double delta)
{
  return IsValidWaypoints(world, ConfigurationsOf(path.States()), delta);
}

/// Start and goal must be distinct valid states of the query's world.
inline bool ValidateQuery(const QueryInstance& query)
{
  const long n = query.world.Dimension();
  return query.q_start.size() == n && query.q_goal.size() == n
      && !SameConfiguration(query.q_start, query.q_goal)
      && IsValidState(query.world, query.q_start)
      && IsValidState(query.world, query.q_goal);
}

/// Per-query validity checker used by the planners. It applies the
/// discretized check at resolution delta and, when certification is on,
/// additionally proves every edge collision-free in between samples using
/// workspace clearance against a motion bound (bisecting where needed).
/// Holds a check counter, so one instance belongs to one query.
class MotionValidator
{
public:
  MotionValidator(const World& world, const double delta, const bool certify)
      : world_(world), delta_(delta), certify_(certify)
  {
    if (!(delta_ > 0.0))
    {
      Throw(ErrorCode::InvalidArgument, "check resolution must be > 0");
    }
  }

  bool StateValid(const Configuration& q)
  {
    checks_++;
    return IsValidState(world_, q);
  }

  bool EdgeValid(const Configuration& a, const Configuration& b)
  {
    const auto valid = [&](const Configuration& q) { return StateValid(q); };
    if (!ForEachEdgeSample(a, b, delta_, valid))
    {
      return false;
    }
    return !certify_ || EdgeCertified(a, b);
  }

  bool WaypointsValid(std::span<const PhasedState> states)
  {
    for (size_t idx = 1; idx < states.size(); idx++)
    {
      if (!EdgeValid(states[idx - 1].q, states[idx].q))
      {
        return false;
      }
    }
    return true;
  }

  bool SegmentValid(const MicroSegment& psi) { return WaypointsValid(psi.States()); }

  bool PathValid(const PathExperience& path) { return WaypointsValid(path.States()); }

  uint64_t Checks() const { return checks_; }
  double Delta() const { return delta_; }
  const World& GetWorld() const { return world_; }

private:
  static constexpr double kMargin = 1e-9;
  static constexpr int kMaxDepth = 30;

  double CountedClearance(const Configuration& q)
  {
    checks_++;
    return Clearance(world_, q);
  }

  bool EdgeCertified(const Configuration& a, const Configuration& b)
  {
    struct Pending
    {
      Configuration a;
      Configuration b;
      double clearance_a;
      double clearance_b;
      int depth;
    };
    const double floor = delta_ * std::ldexp(1.0, -12);
    std::vector<Pending> stack;
    stack.push_back({a, b, CountedClearance(a), CountedClearance(b), 0});
    while (!stack.empty())
    {
      Pending edge = std::move(stack.back());
      stack.pop_back();
      if (!(edge.clearance_a > kMargin) || !(edge.clearance_b > kMargin))
      {
        return false;
      }
      const double motion = WorkspaceMotionBound(world_, edge.a, edge.b);
      if (edge.clearance_a + edge.clearance_b >= motion + 2.0 * kMargin)
      {
        continue;
      }
      if (edge.depth >= kMaxDepth || (edge.b - edge.a).norm() < floor)
      {
        return false;
      }
      Configuration mid = 0.5 * (edge.a + edge.b);
      if (!world_.InBounds(mid))
      {
        return false;
      }
      const double clearance_mid = CountedClearance(mid);
      stack.push_back({mid, edge.b, clearance_mid, edge.clearance_b, edge.depth + 1});
      stack.push_back({std::move(edge.a), std::move(mid), edge.clearance_a,
                       clearance_mid, edge.depth + 1});
    }
    return true;
  }

  const World& world_;
  double delta_;
  bool certify_;
  uint64_t checks_ = 0;
};
}  // namespace ertkit
