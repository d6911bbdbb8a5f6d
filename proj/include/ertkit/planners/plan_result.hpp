#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/planners/segment.hpp>
#include <ertkit/planners/tree.hpp>

namespace ertkit
{
enum class PlanStatus
{
  Solved,
  Timeout,
  InvalidQuery
};

enum class SolvedBy
{
  None,
  PriorValid,
  TreeSearch
};

enum class StopReason
{
  None,
  Timeout,
  MaxIterations
};

inline const char* ToString(const PlanStatus status)
{
  switch (status)
  {
    case PlanStatus::Solved: return "solved";
    case PlanStatus::Timeout: return "timeout";
    case PlanStatus::InvalidQuery: return "invalid_query";
  }
  return "unknown";
}

inline const char* ToString(const SolvedBy solved_by)
{
  switch (solved_by)
  {
    case SolvedBy::None: return "none";
    case SolvedBy::PriorValid: return "prior_valid";
    case SolvedBy::TreeSearch: return "tree_search";
  }
  return "unknown";
}

inline const char* ToString(const StopReason reason)
{
  switch (reason)
  {
    case StopReason::None: return "none";
    case StopReason::Timeout: return "timeout";
    case StopReason::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

struct PlanStats
{
  uint64_t iterations = 0;
  uint64_t validity_checks = 0;
  std::vector<size_t> tree_sizes;
  double elapsed_seconds = 0.0;
  SolvedBy solved_by = SolvedBy::None;
  StopReason stop_reason = StopReason::None;
};

using Polyline = std::vector<Configuration>;

struct PlanResult
{
  PlanStatus status = PlanStatus::InvalidQuery;
  std::optional<PathExperience> path;
  /// Solution states before arc-length re-parametrization, carrying the
  /// phases of the prior slices they were morphed from.
  std::vector<PhasedState> source_trace;
  PlanStats stats;
  /// Filled when PlannerParams::keep_trees is set.
  std::optional<PathExperience> mapped_prior;
  std::vector<ExperienceTree> trees;
  std::vector<std::vector<Polyline>> tree_edges;

  bool Solved() const { return status == PlanStatus::Solved; }
};

/// Wall-clock and iteration budget of one query.
class StopCondition
{
public:
  explicit StopCondition(const PlannerParams& params)
      : start_(std::chrono::steady_clock::now()),
        timeout_(params.timeout),
        max_iterations_(params.max_iterations),
        enforce_timeout_(params.enforce_timeout) {}

  /// Checked once per iteration, before the iteration runs.
  bool ShouldStop(const uint64_t iterations)
  {
    if (iterations >= max_iterations_)
    {
      reason_ = StopReason::MaxIterations;
      return true;
    }
    if (enforce_timeout_ && Elapsed() >= timeout_)
    {
      reason_ = StopReason::Timeout;
      return true;
    }
    return false;
  }

  double Elapsed() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  StopReason Reason() const { return reason_; }

private:
  std::chrono::steady_clock::time_point start_;
  double timeout_;
  uint64_t max_iterations_;
  bool enforce_timeout_;
  StopReason reason_ = StopReason::None;
};

inline std::vector<Polyline> EdgesOf(const ExperienceTree& tree)
{
  std::vector<Polyline> edges;
  for (const auto& node : tree.Nodes())
  {
    if (node.inbound)
    {
      edges.push_back(ConfigurationsOf(node.inbound->States()));
    }
  }
  return edges;
}
}  // namespace ertkit
