#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/planners/segment.hpp>
#include <ertkit/rng.hpp>

namespace ertkit
{
/// Ordered collection of prior paths; order is the tie-break priority.
class ExperienceLibrary
{
public:
  ExperienceLibrary() = default;

  explicit ExperienceLibrary(std::vector<PathExperience> experiences)
  {
    for (auto& experience : experiences)
    {
      Append(std::move(experience));
    }
  }

  void Append(PathExperience experience)
  {
    if (!experiences_.empty())
    {
      CheckDimensions(Dimension(), experience.Dimension(), "ExperienceLibrary");
    }
    experiences_.push_back(std::move(experience));
  }

  /// The first `count` experiences, in order.
  ExperienceLibrary Prefix(const size_t count) const
  {
    ExperienceLibrary prefix;
    const size_t kept = std::min(count, experiences_.size());
    prefix.experiences_.assign(experiences_.begin(),
                               experiences_.begin() + static_cast<std::ptrdiff_t>(kept));
    return prefix;
  }

  const std::vector<PathExperience>& Experiences() const { return experiences_; }
  size_t Size() const { return experiences_.size(); }
  bool Empty() const { return experiences_.empty(); }
  long Dimension() const { return experiences_.empty() ? 0 : experiences_.front().Dimension(); }
  const PathExperience& operator[](const size_t idx) const { return experiences_.at(idx); }

private:
  std::vector<PathExperience> experiences_;
};

/// Start/goal proximity score of one experience for a query.
inline double SelectionScore(const PathExperience& experience,
                             const Configuration& q_start,
                             const Configuration& q_goal)
{
  return Distance(experience.Front(), q_start) + Distance(experience.Back(), q_goal);
}

/// Index of the experience whose endpoints are closest to the query's start
/// and goal (summed Euclidean distances); the lowest index wins ties. Only
/// the first `limit` entries are considered.
inline size_t SelectExperienceIndex(const ExperienceLibrary& library,
                                    const Configuration& q_start,
                                    const Configuration& q_goal,
                                    const size_t limit = std::numeric_limits<size_t>::max())
{
  if (library.Empty())
  {
    Throw(ErrorCode::EmptyLibrary, "cannot select from an empty library");
  }
  CheckDimensions(library.Dimension(), q_start.size(), "SelectExperience(q_start)");
  CheckDimensions(library.Dimension(), q_goal.size(), "SelectExperience(q_goal)");
  size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  const size_t end = std::min(limit, library.Size());
  if (end == 0)
  {
    Throw(ErrorCode::EmptyLibrary, "cannot select from an empty prefix");
  }
  for (size_t idx = 0; idx < end; idx++)
  {
    const double score = SelectionScore(library[idx], q_start, q_goal);
    if (score < best_score)
    {
      best_score = score;
      best = idx;
    }
  }
  return best;
}

inline const PathExperience& SelectExperience(const ExperienceLibrary& library,
                                              const Configuration& q_start,
                                              const Configuration& q_goal)
{
  return library[SelectExperienceIndex(library, q_start, q_goal)];
}

/// Maps a prior onto a query with a full-span connect morph, so the result
/// starts at q_start and ends at q_goal with the prior's phases.
inline PathExperience MapExperience(const PathExperience& xi_d,
                                    const Configuration& q_start,
                                    const Configuration& q_goal)
{
  CheckDimensions(xi_d.Dimension(), q_start.size(), "MapExperience(q_start)");
  CheckDimensions(xi_d.Dimension(), q_goal.size(), "MapExperience(q_goal)");
  Rng unused(0);
  const PlannerParams params;
  GeneratedSegment mapped = GenerateSegment(
      PhasedState(q_start, 0.0), PhasedState(q_goal, 1.0), xi_d,
      Direction::Forward, params, unused);
  return PathExperience(mapped.segment.States());
}
}  // namespace ertkit
