#include "bubblefl/symtab.hpp"

#include "bubblefl/error.hpp"

namespace bfl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
  case ErrorKind::ArityMismatch: return "ArityMismatch";
  case ErrorKind::CycleCreated: return "CycleCreated";
  case ErrorKind::CorruptStore: return "CorruptStore";
  case ErrorKind::SyntaxError: return "SyntaxError";
  case ErrorKind::NonLinearLhs: return "NonLinearLhs";
  case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
  case ErrorKind::UnboundWhereName: return "UnboundWhereName";
  case ErrorKind::NotInductivelySequential: return "NotInductivelySequential";
  case ErrorKind::NotNormalForm: return "NotNormalForm";
  case ErrorKind::IsRoot: return "IsRoot";
  case ErrorKind::NotAChoice: return "NotAChoice";
  case ErrorKind::BadDominator: return "BadDominator";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::NotStaticallyEnumerable: return "NotStaticallyEnumerable";
  case ErrorKind::ArithmeticOverflow: return "ArithmeticOverflow";
  case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
  case SymbolKind::Operation: return "operation";
  case SymbolKind::Constructor: return "constructor";
  case SymbolKind::Number: return "number";
  case SymbolKind::Variable: return "variable";
  case SymbolKind::Choice: return "choice";
  case SymbolKind::Fail: return "fail";
  }
  return "unknown";
}

SymbolTable::SymbolTable() {
  choice_ = add({"?", SymbolKind::Choice, 0, 0, Builtin::None});
  fail_ = add({"fail", SymbolKind::Fail, 0, 0, Builtin::None});
  add({"+", SymbolKind::Operation, 2, 0, Builtin::Add});
  add({"-", SymbolKind::Operation, 2, 0, Builtin::Sub});
  add({"*", SymbolKind::Operation, 2, 0, Builtin::Mul});
  add({"/", SymbolKind::Operation, 2, 0, Builtin::Div});
  add({"==", SymbolKind::Operation, 2, 0, Builtin::Eq});
  add({"<=", SymbolKind::Operation, 2, 0, Builtin::Leq});
  true_ = add({"True", SymbolKind::Constructor, 0, 0, Builtin::None});
  false_ = add({"False", SymbolKind::Constructor, 0, 0, Builtin::None});
}

SymbolId SymbolTable::add(Symbol symbol) {
  auto id = static_cast<SymbolId>(symbols_.size());
  by_name_.emplace(symbol.name, id);
  symbols_.push_back(std::move(symbol));
  return id;
}

SymbolId SymbolTable::intern(std::string_view name, SymbolKind kind, std::size_t arity) {
  if (name.empty())
    throw Error(ErrorKind::SyntaxError, "empty symbol name");
  if (kind == SymbolKind::Number || kind == SymbolKind::Choice || kind == SymbolKind::Fail)
    throw Error(ErrorKind::DuplicateSymbol,
                "symbol kind " + std::string(to_string(kind)) + " is reserved");
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
    const Symbol& existing = symbols_[it->second];
    if (existing.kind != kind || existing.arity != arity)
      throw Error(ErrorKind::DuplicateSymbol,
                  "'" + std::string(name) + "' already declared as " +
                      std::string(to_string(existing.kind)) + "/" +
                      std::to_string(existing.arity));
    return it->second;
  }
  return add({std::string(name), kind, arity, 0, Builtin::None});
}

SymbolId SymbolTable::number(std::int64_t value) {
  if (auto it = numbers_.find(value); it != numbers_.end())
    return it->second;
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({std::to_string(value), SymbolKind::Number, 0, value, Builtin::None});
  numbers_.emplace(value, id);
  return id;
}

std::optional<SymbolId> SymbolTable::lookup(std::string_view name) const {
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end())
    return it->second;
  return std::nullopt;
}

} // namespace bfl
