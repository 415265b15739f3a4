#include "bubblefl/ast.hpp"

namespace bfl {

namespace {

bool is_infix(const Symbol& s) {
  return s.builtin != Builtin::None || s.kind == SymbolKind::Choice;
}

std::string number_text(const Symbol& s) {
  return s.value < 0 ? "(" + s.name + ")" : s.name;
}

} // namespace

std::string format_pattern(const Pattern& p, const SymbolTable& symbols,
                           const std::vector<std::string>& var_names) {
  if (p.kind == Pattern::Kind::Variable) {
    std::string name = p.slot < 0 ? "_" : var_names.at(static_cast<std::size_t>(p.slot));
    return p.strict ? "!" + name : name;
  }
  const Symbol& s = symbols[p.symbol];
  if (s.kind == SymbolKind::Number)
    return number_text(s);
  if (p.args.empty())
    return s.name;
  std::string out = s.name + "(";
  for (std::size_t i = 0; i < p.args.size(); ++i)
    out += (i ? ", " : "") + format_pattern(p.args[i], symbols, var_names);
  return out + ")";
}

std::string format_term(const Term& t, const SymbolTable& symbols,
                        const std::vector<std::string>& var_names) {
  if (t.kind == Term::Kind::Var)
    return t.slot < var_names.size() ? var_names[t.slot] : "_" + std::to_string(t.slot);
  const Symbol& s = symbols[t.symbol];
  if (s.kind == SymbolKind::Number)
    return number_text(s);
  if (is_infix(s) && t.args.size() == 2)
    return "(" + format_term(t.args[0], symbols, var_names) + " " + s.name + " " +
           format_term(t.args[1], symbols, var_names) + ")";
  if (t.args.empty())
    return s.name;
  std::string out = s.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i)
    out += (i ? ", " : "") + format_term(t.args[i], symbols, var_names);
  return out + ")";
}

std::string format_rule(const Rule& rule, const SymbolTable& symbols) {
  std::string out = symbols.name(rule.op);
  if (!rule.lhs.empty()) {
    out += "(";
    for (std::size_t i = 0; i < rule.lhs.size(); ++i)
      out += (i ? ", " : "") + format_pattern(rule.lhs[i], symbols, rule.var_names);
    out += ")";
  }
  return out + " = " + format_term(rule.rhs, symbols, rule.var_names);
}

} // namespace bfl
