#pragma once

#include "bubblefl/ast.hpp"
#include "bubblefl/graph.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace bfl {

struct SourceText {
  std::string name;
  std::string text;
};

/// Parses data declarations and rewrite rules.
///
/// A declaration starts in column 1; indented lines continue it. `--` starts
/// a comment. Constructors must be declared with `data T a = C1 a | C2`;
/// every other identifier on a left-hand side is a variable (`_` is
/// anonymous, `!x` demands that argument in head normal form before any
/// rule applies). All sources share one namespace and may reference each
/// other regardless of order.
Program parse_program(std::span<const SourceText> sources,
                      std::shared_ptr<SymbolTable> symbols = nullptr);
Program parse_program(std::string_view text, std::string_view source_name = "<program>");

/// Parses `expr [where Name = expr {, Name = expr}]`.
GoalAst parse_goal(std::string_view text);

ResolvedGoal resolve_goal(const GoalAst& goal, const Program& program);

/// Builds the initial term graph; each where-bound name becomes one node
/// shared by all its occurrences.
Graph build_graph(const ResolvedGoal& goal, std::shared_ptr<SymbolTable> symbols);
Graph build_graph(const GoalAst& goal, const Program& program);

/// Prints the reachable graph as a goal whose where-bindings name every node
/// with more than one incoming edge.
std::string print_with_sharing(const Graph& g);

} // namespace bfl
