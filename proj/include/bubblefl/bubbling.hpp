#pragma once

#include "bubblefl/graph.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace bfl {

enum class Strategy { Bubbling, Copying };

struct DominatorResult {
  NodeId dominator = kNoNode;
  std::vector<NodeId> ancestral_path; // ascending ids; contains dominator, never x

  friend bool operator==(const DominatorResult&, const DominatorResult&) = default;
};

struct BubbleReport {
  std::size_t ap_size = 0;
  std::size_t k = 0;
  std::size_t copies = 0;
};

struct BubbleEvent {
  NodeId choice = kNoNode;
  NodeId dominator = kNoNode;
  BubbleReport report;
};

struct StepReport {
  std::size_t rewrites = 0;
  std::size_t bubblings = 0;
  std::size_t bubble_copies = 0;
  std::size_t failures = 0; // choice alternatives dropped as Fail
  bool fork_requested = false;

  StepReport& operator+=(const StepReport& o) {
    rewrites += o.rewrites;
    bubblings += o.bubblings;
    bubble_copies += o.bubble_copies;
    failures += o.failures;
    fork_requested = fork_requested || o.fork_requested;
    return *this;
  }
};

/// Lazily enumerates every backpointer path from a parent of `x` to the
/// root. Paths may be exponentially many; meant for oracles and tests.
class PathsToRoot {
public:
  PathsToRoot(const Graph& g, NodeId x);

  std::optional<std::vector<NodeId>> next();

private:
  struct Frame {
    NodeId node;
    std::vector<NodeId> parents;
    std::size_t next = 0;
  };

  const Graph& g_;
  std::vector<Frame> stack_;
  bool done_ = false;
};

/// All nodes with a path to `x`, excluding x, ascending.
std::vector<NodeId> ancestors(const Graph& g, NodeId x);

DominatorResult least_dominator(const Graph& g, NodeId x);
DominatorResult root_dominator(const Graph& g, NodeId x);

/// Hoists the choice `x` to the position of `a`, giving each alternative its
/// own copy of the ancestral path.
BubbleReport bubble(Graph& g, NodeId x, NodeId a, const std::vector<NodeId>& ap);

using ArgStepper = std::function<void(NodeId)>;
using BubbleObserver = std::function<void(const BubbleEvent&)>;

/// One step on the choice-rooted node `t`.
StepReport code_choice(Graph& g, NodeId t, Strategy strategy, const ArgStepper& step_arg,
                       const BubbleObserver& observer = {});

} // namespace bfl
