#pragma once

#include "bubblefl/symtab.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace bfl {

struct SourceLoc {
  std::string source;
  int line = 0;
  int column = 0;

  [[nodiscard]] std::string str() const {
    return source + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
};

// Unresolved expression syntax as written in goals and rule bodies.
struct Expr {
  enum class Kind { Number, Name, Apply, Infix };

  Kind kind = Kind::Number;
  std::int64_t value = 0;
  std::string name; // identifier, application head or infix operator
  std::vector<Expr> args;
  SourceLoc loc;
};

struct WhereBinding {
  std::string name;
  Expr expr;
  SourceLoc loc;
};

struct GoalAst {
  Expr body;
  std::vector<WhereBinding> bindings;
};

// Argument indices from an operation-rooted term, 0-based.
using Path = std::vector<std::uint32_t>;

struct Pattern {
  enum class Kind { Variable, Constructor };

  Kind kind = Kind::Variable;
  SymbolId symbol = 0;  // Constructor
  int slot = -1;        // Variable; -1 is the anonymous variable
  bool strict = false;  // Variable written `!x`
  std::vector<Pattern> args;

  static Pattern variable(int slot, bool strict = false) {
    Pattern p;
    p.slot = slot;
    p.strict = strict;
    return p;
  }
  static Pattern constructor(SymbolId symbol, std::vector<Pattern> args = {}) {
    Pattern p;
    p.kind = Kind::Constructor;
    p.symbol = symbol;
    p.args = std::move(args);
    return p;
  }
};

// Resolved right-hand side. In rules a Var slot names a left-hand-side
// variable; in goals it names a where-binding.
struct Term {
  enum class Kind { Var, Apply };

  Kind kind = Kind::Apply;
  SymbolId symbol = 0;
  std::uint32_t slot = 0;
  std::vector<Term> args;

  static Term var(std::uint32_t slot) {
    Term t;
    t.kind = Kind::Var;
    t.slot = slot;
    return t;
  }
  static Term apply(SymbolId symbol, std::vector<Term> args = {}) {
    Term t;
    t.symbol = symbol;
    t.args = std::move(args);
    return t;
  }
};

struct Rule {
  SymbolId op = 0;
  std::vector<Pattern> lhs;
  Term rhs;
  std::vector<std::string> var_names; // by slot
  std::vector<Path> var_paths;        // by slot
  SourceLoc loc;
};

struct DataDecl {
  std::string type_name;
  std::vector<SymbolId> constructors;
};

struct Program {
  std::shared_ptr<SymbolTable> symbols;
  std::vector<DataDecl> data;
  std::vector<Rule> rules;
  std::vector<SymbolId> operations; // in order of first definition
  std::unordered_map<SymbolId, std::vector<std::size_t>> rules_of;
};

struct ResolvedGoal {
  Term body;
  std::vector<Term> bindings;
  std::vector<std::string> names;
};

std::string format_pattern(const Pattern& p, const SymbolTable& symbols,
                           const std::vector<std::string>& var_names);
std::string format_term(const Term& t, const SymbolTable& symbols,
                        const std::vector<std::string>& var_names);
std::string format_rule(const Rule& rule, const SymbolTable& symbols);

} // namespace bfl
