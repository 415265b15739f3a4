#pragma once

#include "bubblefl/symtab.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfl {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
// Minimum depth of a node that has not been attached below the root yet.
inline constexpr int kUnsetDepth = std::numeric_limits<int>::max() / 2;

struct BackPointer {
  NodeId parent;
  std::uint32_t position;

  friend bool operator==(const BackPointer&, const BackPointer&) = default;
  friend auto operator<=>(const BackPointer&, const BackPointer&) = default;
};

struct NodeEntry {
  SymbolId label = 0;
  std::vector<NodeId> args;
  std::vector<BackPointer> backpointers; // with multiplicity
  int min_depth = kUnsetDepth;
  int max_depth = 0;
  bool nf = false;
  std::optional<NodeId> forward;
  bool dead = false;
};

struct InvariantReport {
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] std::string str() const;
};

/// The expressions table: a single-rooted acyclic term graph.
///
/// Every edge p -[i]-> c is mirrored by a backpointer (p, i) on c. Nodes are
/// never removed from the table. A node that loses its last parent (and is
/// not the root) is marked dead and its own outgoing backpointers are
/// dropped, recursively, so backpointer walks from a live node always end
/// at the root.
///
/// Depth bounds are monotone: an edge p -> c enforces
/// min(c) <= min(p) + 1 and max(c) >= max(p) + 1, and nothing ever raises a
/// minimum or lowers a maximum.
class Graph {
public:
  explicit Graph(std::shared_ptr<SymbolTable> symbols);

  NodeId add_node(SymbolId label, std::span<const NodeId> args);
  NodeId add_node(SymbolId label, std::initializer_list<NodeId> args) {
    return add_node(label, std::span<const NodeId>(args.begin(), args.size()));
  }

  /// Follows forwarding links to a non-forwarded node, compressing the chain.
  NodeId resolve(NodeId n);
  [[nodiscard]] NodeId resolved(NodeId n) const;

  /// Replaces the label and arguments of `redex` in place.
  void overwrite(NodeId redex, SymbolId label, std::span<const NodeId> args);
  void overwrite(NodeId redex, SymbolId label, std::initializer_list<NodeId> args) {
    overwrite(redex, label, std::span<const NodeId>(args.begin(), args.size()));
  }

  /// Makes every parent of `redex` point at `target` and forwards `redex`.
  void redirect(NodeId redex, NodeId target);

  void update_depths(NodeId n, int parent_min, int parent_max);

  /// True when every node below `n` is constructor- or number-labelled.
  /// Refreshes the nf tags it visits.
  bool normal_form(NodeId n);

  void set_root(NodeId n);

  /// Unlinks a parentless, non-root node (a temporary never attached).
  void discard(NodeId n);

  // Sets forward(n) without touching edges. Used to build corrupt stores in
  // tests and nothing else.
  void force_forward(NodeId n, NodeId target) { nodes_.at(n).forward = target; }
  NodeEntry& raw_entry(NodeId n) { return nodes_.at(n); }

  [[nodiscard]] InvariantReport check_invariants() const;
  [[nodiscard]] std::string dump() const;

  [[nodiscard]] std::vector<NodeId> reachable() const; // ascending ids
  [[nodiscard]] bool reaches(NodeId from, NodeId to) const;

  /// Copies the subgraph reachable from `from` into a fresh graph rooted at
  /// the copy. Sharing is preserved. `copied` receives the node count.
  [[nodiscard]] Graph extract(NodeId from, std::size_t* copied = nullptr) const;

  [[nodiscard]] NodeId root() const noexcept { return root_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] const NodeEntry& entry(NodeId n) const { return nodes_.at(n); }
  [[nodiscard]] SymbolId label(NodeId n) const { return nodes_.at(n).label; }
  [[nodiscard]] const std::vector<NodeId>& args(NodeId n) const { return nodes_.at(n).args; }
  [[nodiscard]] const std::vector<BackPointer>& backpointers(NodeId n) const {
    return nodes_.at(n).backpointers;
  }
  /// Distinct parents in first-seen order.
  [[nodiscard]] std::vector<NodeId> parents(NodeId n) const;
  [[nodiscard]] bool is_live(NodeId n) const {
    const auto& e = nodes_.at(n);
    return !e.dead && !e.forward;
  }
  [[nodiscard]] SymbolKind kind(NodeId n) const { return symbols_->kind(label(n)); }

  [[nodiscard]] SymbolTable& symbols() const { return *symbols_; }
  [[nodiscard]] const std::shared_ptr<SymbolTable>& symbol_table() const { return symbols_; }

private:
  void check_arity(SymbolId label, std::size_t count) const;
  void add_backpointer(NodeId child, NodeId parent, std::uint32_t position);
  void remove_backpointer(NodeId child, NodeId parent, std::uint32_t position);
  void kill(NodeId n);
  bool compute_nf(SymbolId label, std::span<const NodeId> args) const;

  std::shared_ptr<SymbolTable> symbols_;
  std::vector<NodeEntry> nodes_;
  NodeId root_ = kNoNode;
};

} // namespace bfl
