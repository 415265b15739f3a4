#pragma once

#include "bubblefl/ast.hpp"
#include "bubblefl/bubbling.hpp"
#include "bubblefl/deftree.hpp"
#include "bubblefl/engine.hpp"
#include "bubblefl/graph.hpp"

#include <vector>

namespace bfl {

inline constexpr std::size_t kBruteForceLimit = 20;

/// Dominator by intersecting every path to the root. The result is the
/// common node farthest (by shortest distance) from the root.
DominatorResult brute_dominator(const Graph& g, NodeId x);

struct SubstitutionOptions {
  std::size_t budget = 10000; // per assignment
  Mode mode = Mode::NormalForm;
  bool duplicate = false;     // copy where-bindings per occurrence first
};

/// Evaluates one deterministic copy of the goal per choice assignment.
/// Choices are expanded outermost-first; a where-bound choice is decided
/// once for all its occurrences unless `duplicate` is set.
std::vector<Outcome> enumerate_by_substitution(const Program& program, const DefTreeMap& trees,
                                               const GoalAst& goal,
                                               SubstitutionOptions options = {},
                                               EngineStats* stats = nullptr);

} // namespace bfl
