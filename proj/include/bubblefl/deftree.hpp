#pragma once

#include "bubblefl/ast.hpp"
#include "bubblefl/graph.hpp"

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bfl {

/// Definitional tree of one operation.
///
/// Pattern variables carry a tree-wide index in `slot` (X1, X2, ... in the
/// order they are introduced). A Branch keyed by nothing but a default child
/// is produced for `!x` arguments: it demands head normal form and accepts
/// any constructor or number.
struct DefTree {
  enum class Kind { Branch, Leaf };

  Kind kind = Kind::Leaf;
  SymbolId op = 0;
  std::vector<Pattern> pattern; // arguments of op
  Path position;                // Branch
  std::vector<SymbolId> keys;   // Branch, parallel to children
  std::vector<DefTree> children;
  std::unique_ptr<DefTree> default_child;
  std::vector<std::size_t> rules; // Leaf: variant rules, source order
};

using DefTreeMap = std::unordered_map<SymbolId, DefTree>;

DefTree build_deftree(const Program& program, std::span<const std::size_t> rules);
DefTreeMap build_all(const Program& program);

/// Indented rendering; inductive positions are printed as `[pos k]`
/// (1-based, dotted for nested positions).
std::string dump_tree(const DefTree& tree, const Program& program);

struct Decision {
  enum class Kind { RewriteTo, NeedStep, FailMatch, Compute };

  Kind kind = Kind::FailMatch;
  const DefTree* leaf = nullptr;
  std::vector<std::vector<NodeId>> bindings; // per leaf rule, by variable slot
  std::vector<NodeId> positions;             // NeedStep, distinct
  SymbolId result = 0;                       // Compute
};

/// Walks `tree` against the operation-rooted node `redex`.
Decision match_step(const Graph& g, NodeId redex, const DefTree& tree, const Program& program);

/// Same contract for `+ - * / == <=`. Both arguments are demanded; every
/// operation- or choice-rooted argument is reported in one NeedStep.
Decision match_builtin(const Graph& g, NodeId redex);

/// Reads the nodes bound to a rule's left-hand-side variables.
std::vector<NodeId> bind_variables(const Graph& g, NodeId redex, const Rule& rule);

} // namespace bfl
