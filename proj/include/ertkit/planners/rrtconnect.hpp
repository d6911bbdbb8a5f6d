#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/planners/plan_result.hpp>
#include <ertkit/planners/segment.hpp>
#include <ertkit/rng.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit
{
namespace detail
{
/// Plain configuration tree for the RRTConnect baseline.
struct RrtTree
{
  std::vector<Configuration> configs;
  std::vector<std::optional<size_t>> parents;

  explicit RrtTree(Configuration root)
  {
    configs.push_back(std::move(root));
    parents.push_back(std::nullopt);
  }

  size_t Nearest(const Configuration& q) const
  {
    size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (size_t idx = 0; idx < configs.size(); idx++)
    {
      const double d = (configs[idx] - q).squaredNorm();
      if (d < best_distance)
      {
        best_distance = d;
        best = idx;
      }
    }
    return best;
  }

  std::vector<Configuration> PathToRoot(size_t idx) const
  {
    std::vector<Configuration> chain;
    chain.push_back(configs[idx]);
    while (parents[idx])
    {
      idx = *parents[idx];
      chain.push_back(configs[idx]);
    }
    return chain;
  }

  std::vector<Polyline> Edges() const
  {
    std::vector<Polyline> edges;
    for (size_t idx = 0; idx < configs.size(); idx++)
    {
      if (parents[idx])
      {
        edges.push_back({configs[*parents[idx]], configs[idx]});
      }
    }
    return edges;
  }
};

enum class RrtExtend
{
  Reached,
  Advanced,
  Trapped
};

inline RrtExtend RrtExtendTowards(RrtTree& tree, const Configuration& target,
                                  const double step, MotionValidator& validator)
{
  const size_t near = tree.Nearest(target);
  const Configuration& from = tree.configs[near];
  const double d = (target - from).norm();
  const bool reaches = d <= step;
  Configuration next = reaches ? target : Configuration(from + (step / d) * (target - from));
  if (!validator.EdgeValid(from, next))
  {
    return RrtExtend::Trapped;
  }
  tree.configs.push_back(std::move(next));
  tree.parents.push_back(near);
  return reaches ? RrtExtend::Reached : RrtExtend::Advanced;
}
}  // namespace detail

/// Bi-directional RRT with the greedy connect heuristic: uniform samples in
/// the bounds, fixed extension step, same validity checker as the
/// experience planners.
inline PlanResult RrtConnectPlan(const QueryInstance& query, const PlannerParams& params)
{
  params.Validate();
  StopCondition clock(params);
  PlanResult result;
  result.stats.tree_sizes = {0, 0};
  if (!ValidateQuery(query))
  {
    result.status = PlanStatus::InvalidQuery;
    return result;
  }
  const World& world = query.world;
  MotionValidator validator(world, params.delta.value_or(world.DefaultDelta()),
                            params.certify_motions);
  const double step = params.rrt_step_fraction * world.Diameter();
  Rng rng(params.seed);

  detail::RrtTree start_tree(query.q_start);
  detail::RrtTree goal_tree(query.q_goal);
  detail::RrtTree* active = &start_tree;
  detail::RrtTree* other = &goal_tree;

  const auto finish_stats = [&](const uint64_t iterations) {
    result.stats.iterations = iterations;
    result.stats.validity_checks = validator.Checks();
    result.stats.elapsed_seconds = clock.Elapsed();
    result.stats.tree_sizes = {start_tree.configs.size(), goal_tree.configs.size()};
    if (params.keep_trees)
    {
      result.tree_edges = {start_tree.Edges(), goal_tree.Edges()};
    }
  };

  uint64_t iterations = 0;
  Configuration sample(world.Dimension());
  while (!clock.ShouldStop(iterations))
  {
    iterations++;
    for (long i = 0; i < sample.size(); i++)
    {
      sample[i] = rng.Uniform(world.Lower()[i], world.Upper()[i]);
    }
    if (detail::RrtExtendTowards(*active, sample, step, validator) != detail::RrtExtend::Trapped)
    {
      const Configuration target = active->configs.back();
      detail::RrtExtend outcome = detail::RrtExtend::Advanced;
      while (outcome == detail::RrtExtend::Advanced)
      {
        outcome = detail::RrtExtendTowards(*other, target, step, validator);
      }
      if (outcome == detail::RrtExtend::Reached)
      {
        std::vector<Configuration> from_start =
            start_tree.PathToRoot(start_tree.configs.size() - 1);
        std::reverse(from_start.begin(), from_start.end());
        const std::vector<Configuration> to_goal =
            goal_tree.PathToRoot(goal_tree.configs.size() - 1);
        // Both leaves hold the same configuration; keep it once.
        from_start.insert(from_start.end(), to_goal.begin() + 1, to_goal.end());
        result.status = PlanStatus::Solved;
        result.path = PhaseParametrize(from_start);
        result.source_trace = result.path->States();
        result.stats.solved_by = SolvedBy::TreeSearch;
        finish_stats(iterations);
        return result;
      }
    }
    std::swap(active, other);
  }
  result.status = PlanStatus::Timeout;
  result.stats.stop_reason = clock.Reason();
  finish_stats(iterations);
  return result;
}
}  // namespace ertkit
