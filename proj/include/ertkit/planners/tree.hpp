#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/rng.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit
{
struct TreeNode
{
  PhasedState state;
  std::optional<size_t> parent;
  std::optional<MicroSegment> inbound;
  uint64_t weight = 0;

  bool operator==(const TreeNode& other) const = default;
};

/// Tree of morphed micro-segments. Nodes are picked with probability
/// proportional to 1 / (w + 1), where w counts earlier selections; a
/// Fenwick tree over those terms keeps selection logarithmic.
class ExperienceTree
{
public:
  ExperienceTree(PhasedState root, const Direction direction)
      : direction_(direction)
  {
    nodes_.push_back({std::move(root), std::nullopt, std::nullopt, 0});
    FenwickPush(1.0);
  }

  Direction GetDirection() const { return direction_; }
  size_t Size() const { return nodes_.size(); }
  const std::vector<TreeNode>& Nodes() const { return nodes_; }
  const TreeNode& Node(const size_t idx) const { return nodes_.at(idx); }
  const TreeNode& Root() const { return nodes_.front(); }

  /// Appends a child; the caller has already validated the segment.
  size_t AddNode(PhasedState state, const size_t parent, MicroSegment inbound)
  {
    nodes_.push_back({std::move(state), parent, std::move(inbound), 0});
    FenwickPush(1.0);
    return nodes_.size() - 1;
  }

  /// Normalized selection probability of node idx under current weights.
  double SelectionProbability(const size_t idx) const
  {
    double total = 0.0;
    for (const auto& node : nodes_)
    {
      total += 1.0 / static_cast<double>(node.weight + 1);
    }
    return (1.0 / static_cast<double>(nodes_.at(idx).weight + 1)) / total;
  }

  /// Weighted draw; the chosen node's weight is incremented.
  size_t SelectNode(Rng& rng)
  {
    const double target = rng.Uniform01() * FenwickPrefix(nodes_.size());
    size_t idx = FenwickFind(target);
    if (idx >= nodes_.size())
    {
      idx = nodes_.size() - 1;
    }
    SetWeight(idx, nodes_[idx].weight + 1);
    return idx;
  }

  void SetWeight(const size_t idx, const uint64_t weight)
  {
    const double before = Term(nodes_.at(idx).weight);
    nodes_[idx].weight = weight;
    FenwickAdd(idx, Term(weight) - before);
  }

  /// Root-to-node chain of node indices.
  std::vector<size_t> Lineage(size_t idx) const
  {
    std::vector<size_t> chain;
    chain.push_back(idx);
    while (nodes_.at(idx).parent)
    {
      idx = *nodes_[idx].parent;
      chain.push_back(idx);
    }
    return {chain.rbegin(), chain.rend()};
  }

  bool operator==(const ExperienceTree& other) const
  {
    return direction_ == other.direction_ && nodes_ == other.nodes_;
  }

private:
  static double Term(const uint64_t weight)
  {
    return 1.0 / static_cast<double>(weight + 1);
  }

  void FenwickPush(const double value)
  {
    // Appending position i (1-based) stores value plus the partial sums it
    // covers: elements (i - lowbit(i), i - 1].
    const size_t i = fenwick_.size() + 1;
    double sum = value;
    const size_t low = i & (~i + 1);
    for (size_t j = i - 1; j > i - low; j -= (j & (~j + 1)))
    {
      sum += fenwick_[j - 1];
    }
    fenwick_.push_back(sum);
  }

  void FenwickAdd(const size_t idx, const double delta)
  {
    for (size_t i = idx + 1; i <= fenwick_.size(); i += (i & (~i + 1)))
    {
      fenwick_[i - 1] += delta;
    }
  }

  double FenwickPrefix(size_t count) const
  {
    double sum = 0.0;
    for (; count > 0; count -= (count & (~count + 1)))
    {
      sum += fenwick_[count - 1];
    }
    return sum;
  }

  /// Smallest 0-based index whose inclusive prefix sum exceeds target.
  size_t FenwickFind(double target) const
  {
    size_t pos = 0;
    size_t step = 1;
    while ((step << 1) <= fenwick_.size())
    {
      step <<= 1;
    }
    for (; step > 0; step >>= 1)
    {
      const size_t next = pos + step;
      if (next <= fenwick_.size() && fenwick_[next - 1] <= target)
      {
        pos = next;
        target -= fenwick_[next - 1];
      }
    }
    return pos;
  }

  Direction direction_;
  std::vector<TreeNode> nodes_;
  std::vector<double> fenwick_;
};

enum class ExtendResult
{
  Advanced,
  Failed
};

/// Adds s_targ below from_node if psi is entirely valid; the tree is left
/// untouched otherwise.
inline ExtendResult Extend(ExperienceTree& tree, const MicroSegment& psi,
                           const size_t from_node, const PhasedState& s_targ,
                           MotionValidator& validator)
{
  const TreeNode& from = tree.Node(from_node);
  if (!SameConfiguration(psi.Front().q, from.state.q)
      || psi.Front().alpha != from.state.alpha)
  {
    Throw(ErrorCode::AnchorMismatch, "segment does not start at the extended node");
  }
  if (!SameConfiguration(psi.Back().q, s_targ.q) || psi.Back().alpha != s_targ.alpha)
  {
    Throw(ErrorCode::AnchorMismatch, "segment does not end at the new state");
  }
  const bool monotone = tree.GetDirection() == Direction::Forward
                            ? s_targ.alpha >= from.state.alpha
                            : s_targ.alpha <= from.state.alpha;
  if (!monotone)
  {
    Throw(ErrorCode::InvalidArgument, "extension runs against the tree direction");
  }
  if (!validator.SegmentValid(psi))
  {
    return ExtendResult::Failed;
  }
  tree.AddNode(s_targ, from_node, psi);
  return ExtendResult::Advanced;
}
}  // namespace ertkit
