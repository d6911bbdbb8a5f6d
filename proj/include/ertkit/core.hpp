#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include <ertkit/errors.hpp>

/// Configuration-phase primitives: configurations, phased states,
/// phase-parametrized paths and micro-segments cut out of them.
namespace ertkit
{
/// A point in the n-dimensional configuration space Q.
using Configuration = Eigen::VectorXd;

enum class Direction
{
  Forward,
  Backward
};

inline const char* ToString(const Direction direction)
{
  return direction == Direction::Forward ? "forward" : "backward";
}

inline Direction Opposite(const Direction direction)
{
  return direction == Direction::Forward ? Direction::Backward
                                         : Direction::Forward;
}

inline bool AllFinite(const Configuration& q)
{
  return q.size() >= 1 && q.allFinite();
}

inline double Distance(const Configuration& a, const Configuration& b)
{
  CheckDimensions(a.size(), b.size(), "Distance");
  return (a - b).norm();
}

/// Exact (bitwise value) equality of two configurations.
inline bool SameConfiguration(const Configuration& a, const Configuration& b)
{
  return a.size() == b.size() && (a.array() == b.array()).all();
}

/// A configuration tagged with its task phase alpha in [0, 1].
struct PhasedState
{
  Configuration q;
  double alpha = 0.0;

  PhasedState() = default;
  PhasedState(Configuration config, const double phase)
      : q(std::move(config)), alpha(phase) {}

  bool operator==(const PhasedState& other) const
  {
    return alpha == other.alpha && SameConfiguration(q, other.q);
  }
};

/// Waypoints with strictly increasing phases from exactly 0 to exactly 1.
class PathExperience
{
public:
  PathExperience() = default;

  explicit PathExperience(std::vector<PhasedState> states)
      : states_(std::move(states))
  {
    Validate();
  }

  const std::vector<PhasedState>& States() const { return states_; }
  size_t Size() const { return states_.size(); }
  long Dimension() const { return states_.empty() ? 0 : states_.front().q.size(); }
  const Configuration& Front() const { return states_.front().q; }
  const Configuration& Back() const { return states_.back().q; }

  std::vector<Configuration> Waypoints() const
  {
    std::vector<Configuration> waypoints;
    waypoints.reserve(states_.size());
    for (const auto& state : states_)
    {
      waypoints.push_back(state.q);
    }
    return waypoints;
  }

  bool operator==(const PathExperience& other) const
  {
    return states_ == other.states_;
  }

private:
  void Validate() const
  {
    if (states_.size() < 2)
    {
      Throw(ErrorCode::DegeneratePath, "a path needs at least two states");
    }
    if (states_.front().alpha != 0.0 || states_.back().alpha != 1.0)
    {
      Throw(ErrorCode::PhaseOutOfRange, "path phases must span [0, 1]");
    }
    const long n = states_.front().q.size();
    for (size_t idx = 0; idx < states_.size(); idx++)
    {
      CheckDimensions(n, states_[idx].q.size(), "PathExperience");
      if (!AllFinite(states_[idx].q))
      {
        Throw(ErrorCode::InvalidArgument, "non-finite path configuration");
      }
      if (idx > 0 && !(states_[idx].alpha > states_[idx - 1].alpha))
      {
        Throw(ErrorCode::PhaseOutOfRange,
              "path phases must be strictly increasing");
      }
    }
  }

  std::vector<PhasedState> states_;
};

/// Contiguous phase slice of a path, stored from its anchor end. A backward
/// segment keeps its states in decreasing phase order.
class MicroSegment
{
public:
  MicroSegment() = default;

  MicroSegment(std::vector<PhasedState> states, const Direction direction)
      : states_(std::move(states)), direction_(direction)
  {
    if (states_.size() < 2)
    {
      Throw(ErrorCode::DegenerateSegment, "a segment needs two states");
    }
    anchor_alpha_ = states_.front().alpha;
    span_ = std::abs(states_.back().alpha - states_.front().alpha);
    if (!(span_ > 0.0))
    {
      Throw(ErrorCode::DegenerateSegment, "segment phase span must be > 0");
    }
    for (size_t idx = 1; idx < states_.size(); idx++)
    {
      const double step = states_[idx].alpha - states_[idx - 1].alpha;
      const bool monotone = direction_ == Direction::Forward ? step > 0.0
                                                             : step < 0.0;
      if (!monotone)
      {
        Throw(ErrorCode::PhaseOutOfRange, "segment phases not monotone");
      }
    }
  }

  const std::vector<PhasedState>& States() const { return states_; }
  std::vector<PhasedState>& MutableStates() { return states_; }
  Direction GetDirection() const { return direction_; }
  double AnchorAlpha() const { return anchor_alpha_; }
  double EndAlpha() const { return states_.back().alpha; }
  double Span() const { return span_; }
  long Dimension() const { return states_.front().q.size(); }
  const PhasedState& Front() const { return states_.front(); }
  const PhasedState& Back() const { return states_.back(); }

  /// Same configurations in the opposite order, anchored at the far end.
  MicroSegment Reversed() const
  {
    std::vector<PhasedState> reversed(states_.rbegin(), states_.rend());
    return MicroSegment(std::move(reversed), Opposite(direction_));
  }

  bool operator==(const MicroSegment& other) const
  {
    return direction_ == other.direction_ && states_ == other.states_;
  }

private:
  std::vector<PhasedState> states_;
  double anchor_alpha_ = 0.0;
  double span_ = 0.0;
  Direction direction_ = Direction::Forward;
};

/// Assigns phases by normalized cumulative arc length in Q. Consecutive
/// duplicates (and edges too short to advance the phase) are dropped.
inline PathExperience PhaseParametrize(
    const std::span<const Configuration> waypoints)
{
  if (waypoints.size() < 2)
  {
    Throw(ErrorCode::DegeneratePath, "need at least two waypoints");
  }
  const long n = waypoints.front().size();
  std::vector<Configuration> kept;
  std::vector<double> cumulative;
  kept.reserve(waypoints.size());
  cumulative.reserve(waypoints.size());
  for (const auto& q : waypoints)
  {
    CheckDimensions(n, q.size(), "PhaseParametrize");
    if (!AllFinite(q))
    {
      Throw(ErrorCode::InvalidArgument, "non-finite waypoint");
    }
    if (kept.empty())
    {
      kept.push_back(q);
      cumulative.push_back(0.0);
      continue;
    }
    if (SameConfiguration(q, kept.back()))
    {
      continue;
    }
    const double length = cumulative.back() + (q - kept.back()).norm();
    kept.push_back(q);
    cumulative.push_back(length);
  }
  if (kept.size() < 2 || !(cumulative.back() > 0.0))
  {
    Throw(ErrorCode::DegeneratePath, "fewer than two distinct waypoints");
  }
  const double total = cumulative.back();
  std::vector<PhasedState> states;
  states.reserve(kept.size());
  for (size_t idx = 0; idx < kept.size(); idx++)
  {
    const double alpha = (idx + 1 == kept.size()) ? 1.0 : cumulative[idx] / total;
    if (!states.empty() && !(alpha > states.back().alpha))
    {
      // Phase did not advance; keep the later waypoint only if it is the end.
      if (idx + 1 == kept.size())
      {
        if (states.size() == 1)
        {
          Throw(ErrorCode::DegeneratePath, "fewer than two distinct waypoints");
        }
        states.pop_back();
      }
      else
      {
        continue;
      }
    }
    states.emplace_back(kept[idx], alpha);
  }
  return PathExperience(std::move(states));
}

inline PathExperience PhaseParametrize(const std::vector<Configuration>& waypoints)
{
  return PhaseParametrize(std::span<const Configuration>(waypoints));
}

/// Index of the last stored state with phase <= alpha.
inline size_t BracketIndex(const PathExperience& path, const double alpha)
{
  const auto& states = path.States();
  const auto upper = std::upper_bound(
      states.begin(), states.end(), alpha,
      [](const double value, const PhasedState& state) { return value < state.alpha; });
  const size_t idx = static_cast<size_t>(upper - states.begin());
  return idx == 0 ? 0 : idx - 1;
}

/// Piecewise-linear continuous view of a path at phase alpha.
inline Configuration StateAt(const PathExperience& path, const double alpha)
{
  if (!(alpha >= 0.0 && alpha <= 1.0))
  {
    Throw(ErrorCode::PhaseOutOfRange,
          "phase " + std::to_string(alpha) + " outside [0, 1]");
  }
  const auto& states = path.States();
  const size_t idx = BracketIndex(path, alpha);
  if (states[idx].alpha == alpha || idx + 1 == states.size())
  {
    return states[idx].q;
  }
  const PhasedState& lo = states[idx];
  const PhasedState& hi = states[idx + 1];
  const double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.q + t * (hi.q - lo.q);
}

/// Cuts the phase slice [alpha_a, alpha_b] (or its reverse) out of a path,
/// keeping every stored waypoint strictly inside the slice.
inline MicroSegment ExtractSegment(const PathExperience& path,
                                   const double alpha_a, const double alpha_b)
{
  if (!(alpha_a >= 0.0 && alpha_a <= 1.0 && alpha_b >= 0.0 && alpha_b <= 1.0))
  {
    Throw(ErrorCode::PhaseOutOfRange, "segment phases outside [0, 1]");
  }
  if (alpha_a == alpha_b)
  {
    Throw(ErrorCode::DegenerateSegment, "segment phases coincide");
  }
  const double lo = std::min(alpha_a, alpha_b);
  const double hi = std::max(alpha_a, alpha_b);
  std::vector<PhasedState> states;
  states.emplace_back(StateAt(path, lo), lo);
  for (const auto& state : path.States())
  {
    if (state.alpha > lo && state.alpha < hi)
    {
      states.push_back(state);
    }
  }
  states.emplace_back(StateAt(path, hi), hi);
  if (alpha_a < alpha_b)
  {
    return MicroSegment(std::move(states), Direction::Forward);
  }
  std::reverse(states.begin(), states.end());
  return MicroSegment(std::move(states), Direction::Backward);
}
}  // namespace ertkit
