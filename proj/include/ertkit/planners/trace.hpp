#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/planners/tree.hpp>

namespace ertkit
{
struct TracedPath
{
  PathExperience path;
  std::vector<PhasedState> source_trace;
};

/// One side of a trace: a tree and the node where the trace leaves it.
struct TraceEnd
{
  const ExperienceTree* tree = nullptr;
  size_t leaf = 0;
};

namespace detail
{
inline void AppendStates(std::vector<PhasedState>& trace,
                         const std::vector<PhasedState>& states)
{
  if (trace.empty())
  {
    trace.push_back(states.front());
  }
  else if (!SameConfiguration(trace.back().q, states.front().q))
  {
    Throw(ErrorCode::AnchorMismatch, "trace junction configurations differ");
  }
  for (size_t idx = 1; idx < states.size(); idx++)
  {
    if (!SameConfiguration(trace.back().q, states[idx].q))
    {
      trace.push_back(states[idx]);
    }
  }
}
}  // namespace detail

/// Concatenates the forward tree's root-to-leaf segments, the bridge
/// (oriented from the forward leaf to the backward leaf) and the backward
/// tree's segments from its leaf back to its root. Junction states appear
/// once; the result is re-parametrized by arc length.
inline TracedPath TracePath(const std::optional<TraceEnd>& forward,
                            const MicroSegment* bridge,
                            const std::optional<TraceEnd>& backward)
{
  if (!forward && !backward)
  {
    Throw(ErrorCode::InvalidArgument, "trace needs at least one tree");
  }
  std::vector<PhasedState> trace;
  if (forward)
  {
    const auto& tree = *forward->tree;
    trace.push_back(tree.Root().state);
    for (const size_t idx : tree.Lineage(forward->leaf))
    {
      const auto& node = tree.Node(idx);
      if (node.inbound)
      {
        detail::AppendStates(trace, node.inbound->States());
      }
    }
  }
  if (bridge)
  {
    detail::AppendStates(trace, bridge->States());
  }
  if (backward)
  {
    const auto& tree = *backward->tree;
    if (trace.empty())
    {
      trace.push_back(tree.Node(backward->leaf).state);
    }
    std::vector<size_t> chain = tree.Lineage(backward->leaf);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    {
      const auto& node = tree.Node(*it);
      if (node.inbound)
      {
        std::vector<PhasedState> states(node.inbound->States().rbegin(),
                                        node.inbound->States().rend());
        detail::AppendStates(trace, states);
      }
    }
  }
  std::vector<Configuration> configs = ConfigurationsOf(trace);
  return {PhaseParametrize(configs), std::move(trace)};
}
}  // namespace ertkit
