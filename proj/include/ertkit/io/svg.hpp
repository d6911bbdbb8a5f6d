#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/planners/plan_result.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit::io
{
/// What to draw on top of a query's world. Every layer is optional.
struct Scene
{
  const QueryInstance* query = nullptr;
  std::vector<std::vector<Polyline>> tree_edges;
  std::optional<PathExperience> prior;
  std::optional<PathExperience> solution;
};

namespace detail
{
struct Frame
{
  Vec2 lo;
  Vec2 hi;
  double scale = 1.0;
  double margin = 20.0;

  std::pair<double, double> Map(const Vec2& p) const
  {
    return {margin + (p.x() - lo.x()) * scale, margin + (hi.y() - p.y()) * scale};
  }
  double Width() const { return 2.0 * margin + (hi.x() - lo.x()) * scale; }
  double Height() const { return 2.0 * margin + (hi.y() - lo.y()) * scale; }
};

inline std::string Num(const double v)
{
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", v);
  return buffer;
}

inline Frame FrameFor(const World& world)
{
  Frame frame;
  if (world.Kind() == WorldKind::Point2d)
  {
    frame.lo = Vec2(world.Lower()[0], world.Lower()[1]);
    frame.hi = Vec2(world.Upper()[0], world.Upper()[1]);
  }
  else
  {
    const double reach = world.TotalReach();
    frame.lo = world.Base() - Vec2(reach, reach);
    frame.hi = world.Base() + Vec2(reach, reach);
    for (const auto& obstacle : world.Obstacles())
    {
      std::visit(
          [&](const auto& shape) {
            using Shape = std::decay_t<decltype(shape)>;
            Vec2 extent;
            if constexpr (std::is_same_v<Shape, geometry::Rect>)
            {
              extent = shape.half_extents;
            }
            else
            {
              extent = Vec2(shape.radius, shape.radius);
            }
            frame.lo = frame.lo.cwiseMin(shape.center - extent);
            frame.hi = frame.hi.cwiseMax(shape.center + extent);
          },
          obstacle);
    }
  }
  const double span = std::max(frame.hi.x() - frame.lo.x(), frame.hi.y() - frame.lo.y());
  frame.scale = 600.0 / span;
  return frame;
}

/// Workspace polyline traced by the robot's tool point along straight
/// configuration-space edges, densified for the arm.
inline std::vector<Vec2> ToolTrace(const World& world, const std::vector<Configuration>& configs)
{
  std::vector<Vec2> points;
  for (size_t idx = 0; idx < configs.size(); idx++)
  {
    if (idx == 0 || world.Kind() == WorldKind::Point2d)
    {
      points.push_back(ToolPoint(world, configs[idx]));
      continue;
    }
    constexpr int kPieces = 8;
    for (int k = 1; k <= kPieces; k++)
    {
      const double t = static_cast<double>(k) / kPieces;
      points.push_back(ToolPoint(
          world, Configuration(configs[idx - 1] + t * (configs[idx] - configs[idx - 1]))));
    }
  }
  return points;
}

inline void Polyline(std::ostringstream& out, const Frame& frame, const std::vector<Vec2>& points)
{
  out << "    <polyline points=\"";
  for (size_t idx = 0; idx < points.size(); idx++)
  {
    const auto [x, y] = frame.Map(points[idx]);
    out << (idx ? " " : "") << Num(x) << "," << Num(y);
  }
  out << "\"/>\n";
}

inline void ArmPose(std::ostringstream& out, const Frame& frame, const World& world,
                    const Configuration& q)
{
  std::vector<Vec2> joints{world.Base()};
  for (const auto& link : ArmFk(world, q))
  {
    joints.push_back(link.b);
  }
  Polyline(out, frame, joints);
}
}  // namespace detail

/// Layered SVG document: obstacles, trees, prior, solution, endpoints. For
/// the arm, trees and paths are drawn as tool-point traces and the solution
/// also shows a handful of arm poses.
inline std::string RenderSvg(const Scene& scene)
{
  if (scene.query == nullptr)
  {
    Throw(ErrorCode::InvalidArgument, "scene needs a query");
  }
  const QueryInstance& query = *scene.query;
  const World& world = query.world;
  const detail::Frame frame = detail::FrameFor(world);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::Num(frame.Width())
      << "\" height=\"" << detail::Num(frame.Height()) << "\" viewBox=\"0 0 "
      << detail::Num(frame.Width()) << " " << detail::Num(frame.Height()) << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "  <g id=\"obstacles\" fill=\"#7a7a7a\" stroke=\"none\">\n";
  for (const auto& obstacle : world.Obstacles())
  {
    if (const auto* rect = std::get_if<geometry::Rect>(&obstacle))
    {
      const auto [x, y] = frame.Map(rect->center + Vec2(-rect->half_extents.x(), rect->half_extents.y()));
      out << "    <rect x=\"" << detail::Num(x) << "\" y=\"" << detail::Num(y) << "\" width=\""
          << detail::Num(2.0 * rect->half_extents.x() * frame.scale) << "\" height=\""
          << detail::Num(2.0 * rect->half_extents.y() * frame.scale) << "\"/>\n";
    }
    else
    {
      const auto& circle = std::get<geometry::Circle>(obstacle);
      const auto [x, y] = frame.Map(circle.center);
      out << "    <circle cx=\"" << detail::Num(x) << "\" cy=\"" << detail::Num(y) << "\" r=\""
          << detail::Num(circle.radius * frame.scale) << "\"/>\n";
    }
  }
  out << "  </g>\n";

  const char* tree_colors[] = {"#4f8fd6", "#d68a4f", "#6fb36f", "#b36fb3"};
  out << "  <g id=\"trees\" fill=\"none\" stroke-width=\"0.7\" stroke-opacity=\"0.7\">\n";
  for (size_t t = 0; t < scene.tree_edges.size(); t++)
  {
    out << "   <g id=\"tree" << t << "\" stroke=\"" << tree_colors[t % 4] << "\">\n";
    for (const auto& edge : scene.tree_edges[t])
    {
      detail::Polyline(out, frame, detail::ToolTrace(world, edge));
    }
    out << "   </g>\n";
  }
  out << "  </g>\n";

  out << "  <g id=\"prior\" fill=\"none\" stroke=\"#9b59b6\" stroke-width=\"1.5\" "
         "stroke-dasharray=\"6 4\">\n";
  if (scene.prior)
  {
    detail::Polyline(out, frame, detail::ToolTrace(world, scene.prior->Waypoints()));
  }
  out << "  </g>\n";

  out << "  <g id=\"solution\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2.5\">\n";
  if (scene.solution)
  {
    const auto waypoints = scene.solution->Waypoints();
    detail::Polyline(out, frame, detail::ToolTrace(world, waypoints));
    if (world.Kind() == WorldKind::PlanarArm)
    {
      out << "   <g id=\"poses\" stroke=\"#c0392b\" stroke-width=\"1\" stroke-opacity=\"0.5\">\n";
      constexpr int kPoses = 6;
      for (int k = 0; k <= kPoses; k++)
      {
        detail::ArmPose(out, frame, world,
                        StateAt(*scene.solution, static_cast<double>(k) / kPoses));
      }
      out << "   </g>\n";
    }
  }
  out << "  </g>\n";

  out << "  <g id=\"endpoints\" stroke-width=\"2\" fill=\"none\">\n";
  const auto endpoint = [&](const Configuration& q, const char* color) {
    if (world.Kind() == WorldKind::PlanarArm)
    {
      out << "   <g stroke=\"" << color << "\">\n";
      detail::ArmPose(out, frame, world, q);
      out << "   </g>\n";
    }
    const auto [x, y] = frame.Map(ToolPoint(world, q));
    out << "    <circle cx=\"" << detail::Num(x) << "\" cy=\"" << detail::Num(y)
        << "\" r=\"5\" fill=\"" << color << "\" stroke=\"none\"/>\n";
  };
  endpoint(query.q_start, "#27ae60");
  endpoint(query.q_goal, "#2c3e50");
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}
}  // namespace ertkit::io
