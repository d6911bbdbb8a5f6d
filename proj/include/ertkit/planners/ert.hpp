#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/experience.hpp>
#include <ertkit/planners/plan_result.hpp>
#include <ertkit/planners/segment.hpp>
#include <ertkit/planners/trace.hpp>
#include <ertkit/planners/tree.hpp>
#include <ertkit/rng.hpp>
#include <ertkit/worlds.hpp>

/// Experience-driven random trees: a single prior path is mapped onto the
/// query, then cut into phase slices that are sheared and shifted to grow
/// trees through the configuration-phase space.
namespace ertkit
{
namespace detail
{
/// Shared prologue: query checks, prior mapping and the valid-prior shortcut.
/// Returns a finished result when no tree search is needed.
inline std::optional<PlanResult> MapPriorOrFinish(const QueryInstance& query,
                                                  const PathExperience& prior,
                                                  const PlannerParams& params,
                                                  MotionValidator& validator,
                                                  const StopCondition& clock,
                                                  const size_t tree_count,
                                                  PathExperience& mapped)
{
  PlanResult result;
  result.stats.tree_sizes.assign(tree_count, 0);
  if (!ValidateQuery(query))
  {
    result.status = PlanStatus::InvalidQuery;
    return result;
  }
  CheckDimensions(query.world.Dimension(), prior.Dimension(), "planner prior");
  mapped = MapExperience(prior, query.q_start, query.q_goal);
  if (params.keep_trees)
  {
    result.mapped_prior = mapped;
  }
  if (validator.PathValid(mapped))
  {
    result.status = PlanStatus::Solved;
    result.path = mapped;
    result.source_trace = mapped.States();
    result.stats.solved_by = SolvedBy::PriorValid;
    result.stats.validity_checks = validator.Checks();
    result.stats.elapsed_seconds = clock.Elapsed();
    return result;
  }
  return std::nullopt;
}

inline bool AtDirectionalExtreme(const double alpha, const Direction direction)
{
  return direction == Direction::Forward ? alpha >= 1.0 : alpha <= 0.0;
}

inline void FinishStats(PlanResult& result, const MotionValidator& validator,
                        const StopCondition& clock, const uint64_t iterations,
                        const std::vector<const ExperienceTree*>& trees,
                        const PlannerParams& params)
{
  result.stats.iterations = iterations;
  result.stats.validity_checks = validator.Checks();
  result.stats.elapsed_seconds = clock.Elapsed();
  result.stats.tree_sizes.clear();
  for (const auto* tree : trees)
  {
    result.stats.tree_sizes.push_back(tree->Size());
    if (params.keep_trees)
    {
      result.trees.push_back(*tree);
      result.tree_edges.push_back(EdgesOf(*tree));
    }
  }
}
}  // namespace detail

/// Uni-directional planner: a forward tree from the start; with probability
/// p an iteration tries to connect the selected node to the goal.
inline PlanResult ErtPlan(const QueryInstance& query, const PathExperience& prior,
                          const PlannerParams& params)
{
  params.Validate();
  StopCondition clock(params);
  MotionValidator validator(query.world, params.delta.value_or(query.world.DefaultDelta()),
                            params.certify_motions);
  PathExperience mapped;
  if (auto done = detail::MapPriorOrFinish(query, prior, params, validator, clock, 1, mapped))
  {
    return *done;
  }

  Rng rng(params.seed);
  const PhasedState goal(query.q_goal, 1.0);
  ExperienceTree tree(PhasedState(query.q_start, 0.0), Direction::Forward);
  PlanResult result;
  if (params.keep_trees)
  {
    result.mapped_prior = mapped;
  }
  uint64_t iterations = 0;
  while (!clock.ShouldStop(iterations))
  {
    iterations++;
    const size_t selected = tree.SelectNode(rng);
    const PhasedState s_init = tree.Node(selected).state;
    const bool attempt_goal = rng.Bernoulli(params.p);
    // A node at phase 1 can neither explore forward nor connect to the goal.
    if (detail::AtDirectionalExtreme(s_init.alpha, Direction::Forward))
    {
      continue;
    }
    const std::optional<PhasedState> s_targ =
        attempt_goal ? std::optional<PhasedState>(goal) : std::nullopt;
    GeneratedSegment generated =
        GenerateSegment(s_init, s_targ, mapped, Direction::Forward, params, rng);
    if (Extend(tree, generated.segment, selected, generated.end, validator)
        == ExtendResult::Failed)
    {
      continue;
    }
    if (attempt_goal)
    {
      TracedPath traced = TracePath(TraceEnd{&tree, tree.Size() - 1}, nullptr, std::nullopt);
      result.status = PlanStatus::Solved;
      result.path = std::move(traced.path);
      result.source_trace = std::move(traced.source_trace);
      result.stats.solved_by = SolvedBy::TreeSearch;
      detail::FinishStats(result, validator, clock, iterations, {&tree}, params);
      return result;
    }
  }
  result.status = PlanStatus::Timeout;
  result.stats.stop_reason = clock.Reason();
  detail::FinishStats(result, validator, clock, iterations, {&tree}, params);
  return result;
}

/// Index of the node nearest to q by configuration-only Euclidean distance;
/// ties go to the lowest index.
inline size_t NearestNode(const ExperienceTree& tree, const Configuration& q)
{
  size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (size_t idx = 0; idx < tree.Size(); idx++)
  {
    const double d = (tree.Node(idx).state.q - q).squaredNorm();
    if (d < best_distance)
    {
      best_distance = d;
      best = idx;
    }
  }
  return best;
}

/// Bi-directional planner: forward and backward trees take turns exploring;
/// every successful extension tries a connect-mode bridge from the other
/// tree's nearest node.
inline PlanResult ErtConnectPlan(const QueryInstance& query, const PathExperience& prior,
                                 const PlannerParams& params)
{
  params.Validate();
  StopCondition clock(params);
  MotionValidator validator(query.world, params.delta.value_or(query.world.DefaultDelta()),
                            params.certify_motions);
  PathExperience mapped;
  if (auto done = detail::MapPriorOrFinish(query, prior, params, validator, clock, 2, mapped))
  {
    return *done;
  }

  Rng rng(params.seed);
  ExperienceTree start_tree(PhasedState(query.q_start, 0.0), Direction::Forward);
  ExperienceTree goal_tree(PhasedState(query.q_goal, 1.0), Direction::Backward);
  ExperienceTree* active = &start_tree;
  ExperienceTree* other = &goal_tree;
  PlanResult result;
  if (params.keep_trees)
  {
    result.mapped_prior = mapped;
  }
  constexpr double kExtremeTolerance = 1e-9;

  const auto finish = [&](TracedPath traced, const uint64_t iterations) {
    result.status = PlanStatus::Solved;
    result.path = std::move(traced.path);
    result.source_trace = std::move(traced.source_trace);
    result.stats.solved_by = SolvedBy::TreeSearch;
    detail::FinishStats(result, validator, clock, iterations, {&start_tree, &goal_tree},
                        params);
    return result;
  };

  uint64_t iterations = 0;
  while (!clock.ShouldStop(iterations))
  {
    iterations++;
    const Direction direction = active->GetDirection();
    const size_t selected = active->SelectNode(rng);
    const PhasedState s_init = active->Node(selected).state;
    if (detail::AtDirectionalExtreme(s_init.alpha, direction))
    {
      // Reselect on the same tree; the weight bump already demotes the node.
      continue;
    }
    GeneratedSegment explored =
        GenerateSegment(s_init, std::nullopt, mapped, direction, params, rng);
    if (Extend(*active, explored.segment, selected, explored.end, validator)
        == ExtendResult::Advanced)
    {
      const size_t added = active->Size() - 1;
      const PhasedState& s_targ = active->Node(added).state;
      const PhasedState& other_root = other->Root().state;
      if (s_targ.alpha == other_root.alpha
          && Distance(s_targ.q, other_root.q) <= kExtremeTolerance)
      {
        bool joined = true;
        std::optional<MicroSegment> closing;
        if (!SameConfiguration(s_targ.q, other_root.q))
        {
          std::vector<PhasedState> tail{s_targ, other_root};
          // Equal phases: give the tiny closing edge a nominal phase order.
          tail.back().alpha = std::nextafter(s_targ.alpha, direction == Direction::Forward ? 2.0 : -1.0);
          closing = MicroSegment(tail, direction);
          joined = validator.SegmentValid(*closing);
        }
        if (joined)
        {
          const MicroSegment* bridge = closing ? &*closing : nullptr;
          if (direction == Direction::Forward)
          {
            return finish(TracePath(TraceEnd{active, added}, bridge,
                                    TraceEnd{other, 0}), iterations);
          }
          // The backward tree's leaf is the start; its trace is reversed.
          std::optional<MicroSegment> reversed;
          if (closing)
          {
            reversed = closing->Reversed();
          }
          return finish(TracePath(std::nullopt, reversed ? &*reversed : nullptr,
                                  TraceEnd{active, added}), iterations);
        }
      }

      const size_t near = NearestNode(*other, s_targ.q);
      const PhasedState s_near = other->Node(near).state;
      if (s_near.alpha != s_targ.alpha)
      {
        GeneratedSegment bridge =
            GenerateSegment(s_near, s_targ, mapped, other->GetDirection(), params, rng);
        if (validator.SegmentValid(bridge.segment))
        {
          if (direction == Direction::Forward)
          {
            const MicroSegment oriented = bridge.segment.Reversed();
            return finish(TracePath(TraceEnd{active, added}, &oriented,
                                    TraceEnd{other, near}), iterations);
          }
          return finish(TracePath(TraceEnd{other, near}, &bridge.segment,
                                  TraceEnd{active, added}), iterations);
        }
      }
    }
    std::swap(active, other);
  }
  result.status = PlanStatus::Timeout;
  result.stats.stop_reason = clock.Reason();
  detail::FinishStats(result, validator, clock, iterations, {&start_tree, &goal_tree},
                      params);
  return result;
}
}  // namespace ertkit
