#pragma once

#include "bubblefl/ast.hpp"
#include "bubblefl/bubbling.hpp"
#include "bubblefl/deftree.hpp"
#include "bubblefl/graph.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace bfl {

enum class Mode { HeadNormalForm, NormalForm };

struct Outcome {
  enum class Kind { Value, Failure, BudgetExhausted };

  Kind kind = Kind::Failure;
  std::string term; // Value only

  static Outcome value(std::string t) { return {Kind::Value, std::move(t)}; }
  static Outcome failure() { return {Kind::Failure, {}}; }
  static Outcome exhausted() { return {Kind::BudgetExhausted, {}}; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
  friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

std::string to_string(const Outcome& o);

struct EngineStats {
  std::size_t rounds = 0;
  std::size_t rewrites = 0;
  std::size_t bubblings = 0;
  std::size_t bubbling_copied = 0;
  std::size_t fork_copied = 0;
  std::size_t peak_nodes = 0;

  EngineStats& operator+=(const EngineStats& o);
};

struct EngineOptions {
  Mode mode = Mode::NormalForm;
  Strategy strategy = Strategy::Bubbling;
  std::size_t budget = 10000;             // rounds across all alternatives
  std::optional<std::size_t> first;       // stop after this many values
  bool check_invariants = false;
  bool deterministic_only = false;        // a choice is an error
  BubbleObserver on_bubble;
  // Called before each round with the id of the alternative being stepped.
  std::function<void(std::size_t)> on_round;
};

class Engine {
public:
  Engine(const Program& program, const DefTreeMap& trees, EngineOptions options = {});

  /// One round at `t`: every needed position below it receives at most one
  /// rewriting step.
  StepReport step(Graph& g, NodeId t, Mode m);

  /// Builds `rhs` bottom-up. A bare variable yields its bound node.
  NodeId instantiate_rhs(Graph& g, const Term& rhs, std::span<const NodeId> bindings);

  /// Fair round-robin enumeration of the outcomes of `g`.
  std::vector<Outcome> enumerate(Graph g);

  [[nodiscard]] const EngineStats& stats() const noexcept { return stats_; }
  [[nodiscard]] const EngineOptions& options() const noexcept { return options_; }

private:
  struct Round {
    Graph& g;
    std::unordered_set<NodeId> touched;
    StepReport report;
  };

  void step_node(Round& r, NodeId t, Mode m);
  void step_constructor(Round& r, NodeId t);
  void step_operation(Round& r, NodeId t);
  void rewrite_leaf(Round& r, NodeId t, const Decision& d);
  void verify(const Graph& g, const char* when) const;

  const Program& program_;
  const DefTreeMap& trees_;
  EngineOptions options_;
  EngineStats stats_;
};

/// Canonical text of a normal form; sharing is flattened.
std::string print_value(const Graph& g, NodeId n);

/// Like print_value but accepts any term; builtins and choices print infix.
std::string print_term(const Graph& g, NodeId n);

std::vector<Outcome> enumerate_normal_forms(const Program& program, const DefTreeMap& trees,
                                            const GoalAst& goal, EngineOptions options,
                                            EngineStats* stats = nullptr);

} // namespace bfl
