#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Core>

/// Small 2-D primitives for workspace collision queries.
namespace ertkit::geometry
{
using Vec2 = Eigen::Vector2d;

struct Segment2
{
  Vec2 a;
  Vec2 b;
};

/// Axis-aligned rectangle given by center and half-extents (closed set).
struct Rect
{
  Vec2 center;
  Vec2 half_extents;

  std::array<Vec2, 4> Corners() const
  {
    const Vec2& c = center;
    const Vec2& h = half_extents;
    return {Vec2(c.x() - h.x(), c.y() - h.y()), Vec2(c.x() + h.x(), c.y() - h.y()),
            Vec2(c.x() + h.x(), c.y() + h.y()), Vec2(c.x() - h.x(), c.y() + h.y())};
  }

  bool operator==(const Rect& other) const
  {
    return center == other.center && half_extents == other.half_extents;
  }
};

/// Closed disc.
struct Circle
{
  Vec2 center;
  double radius = 0.0;

  bool operator==(const Circle& other) const
  {
    return center == other.center && radius == other.radius;
  }
};

/// Positive outside, zero on the boundary, negative inside.
inline double SignedDistance(const Rect& rect, const Vec2& p)
{
  const Vec2 d = (p - rect.center).cwiseAbs() - rect.half_extents;
  const double outside = d.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(d.x(), d.y()), 0.0);
  return outside + inside;
}

inline double SignedDistance(const Circle& circle, const Vec2& p)
{
  return (p - circle.center).norm() - circle.radius;
}

inline double PointSegmentDistance(const Vec2& p, const Segment2& s)
{
  const Vec2 ab = s.b - s.a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0)
  {
    return (p - s.a).norm();
  }
  const double t = std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0);
  return (p - (s.a + t * ab)).norm();
}

/// Liang-Barsky clip of a segment against a closed rectangle.
inline bool Intersects(const Segment2& s, const Rect& rect)
{
  const Vec2 lo = rect.center - rect.half_extents;
  const Vec2 hi = rect.center + rect.half_extents;
  const Vec2 d = s.b - s.a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < 2; axis++)
  {
    if (d[axis] == 0.0)
    {
      if (s.a[axis] < lo[axis] || s.a[axis] > hi[axis])
      {
        return false;
      }
      continue;
    }
    double ta = (lo[axis] - s.a[axis]) / d[axis];
    double tb = (hi[axis] - s.a[axis]) / d[axis];
    if (ta > tb)
    {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1)
    {
      return false;
    }
  }
  return true;
}

inline bool Intersects(const Segment2& s, const Circle& circle)
{
  return PointSegmentDistance(circle.center, s) <= circle.radius;
}

/// Unsigned distance; zero when the segment touches the rectangle.
inline double Distance(const Segment2& s, const Rect& rect)
{
  if (Intersects(s, rect))
  {
    return 0.0;
  }
  double best = std::min(SignedDistance(rect, s.a), SignedDistance(rect, s.b));
  for (const Vec2& corner : rect.Corners())
  {
    best = std::min(best, PointSegmentDistance(corner, s));
  }
  return best;
}

inline double Distance(const Segment2& s, const Circle& circle)
{
  return std::max(PointSegmentDistance(circle.center, s) - circle.radius, 0.0);
}
}  // namespace ertkit::geometry
