#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bfl {

enum class SymbolKind { Operation, Constructor, Number, Variable, Choice, Fail };

std::string_view to_string(SymbolKind kind);

// Natively evaluated binary operations over numbers.
enum class Builtin { None, Add, Sub, Mul, Div, Eq, Leq };

using SymbolId = std::uint32_t;

struct Symbol {
  std::string name;
  SymbolKind kind;
  std::size_t arity = 0;
  std::int64_t value = 0; // Number kind only
  Builtin builtin = Builtin::None;
};

/// Interned table of every signature symbol.
///
/// Construction pre-populates the singleton `?` (Choice) and `fail` (Fail)
/// symbols, the arithmetic and comparison builtins and the `True`/`False`
/// constructors they produce. Number symbols are canonical per value and are
/// created on demand, also while evaluating.
class SymbolTable {
public:
  SymbolTable();

  /// Returns the existing id when (name, kind, arity) is already present.
  /// Throws DuplicateSymbol when the name exists with another kind or arity.
  SymbolId intern(std::string_view name, SymbolKind kind, std::size_t arity);

  SymbolId number(std::int64_t value);

  [[nodiscard]] std::optional<SymbolId> lookup(std::string_view name) const;
  [[nodiscard]] const Symbol& operator[](SymbolId id) const { return symbols_.at(id); }
  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }

  [[nodiscard]] SymbolId choice() const noexcept { return choice_; }
  [[nodiscard]] SymbolId fail() const noexcept { return fail_; }
  [[nodiscard]] SymbolId true_ctor() const noexcept { return true_; }
  [[nodiscard]] SymbolId false_ctor() const noexcept { return false_; }

  [[nodiscard]] SymbolKind kind(SymbolId id) const { return symbols_.at(id).kind; }
  [[nodiscard]] const std::string& name(SymbolId id) const { return symbols_.at(id).name; }

  // Head normal form labels: constructors and numbers.
  [[nodiscard]] bool is_constructor_like(SymbolId id) const {
    auto k = kind(id);
    return k == SymbolKind::Constructor || k == SymbolKind::Number;
  }

private:
  SymbolId add(Symbol symbol);

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::unordered_map<std::int64_t, SymbolId> numbers_;
  SymbolId choice_ = 0;
  SymbolId fail_ = 0;
  SymbolId true_ = 0;
  SymbolId false_ = 0;
};

} // namespace bfl
