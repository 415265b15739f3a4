#include "bubblefl/parser.hpp"

#include "bubblefl/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace bfl {

namespace {

// ------------------------------------------------------------------
// lexer
// ------------------------------------------------------------------

enum class Tok { Ident, Number, Op, LParen, RParen, Comma, Semi, Bar, Bang, Equals };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

[[noreturn]] void syntax_error(const SourceLoc& loc, const std::string& msg) {
  throw Error(ErrorKind::SyntaxError, loc.str() + ": " + msg);
}

std::vector<Token> lex(std::string_view source, std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto here = [&] { return SourceLoc{std::string(source), line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceLoc loc = here();
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j]))
        ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), 0, loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
      if (ec != std::errc())
        syntax_error(loc, "integer literal out of range");
      if (j < text.size() && ident_start(text[j]))
        syntax_error(loc, "malformed number");
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), value, loc});
      advance(j - i);
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "==" || two == "<=") {
      out.push_back({Tok::Op, std::string(two), 0, loc});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
    case '+': case '-': case '*': case '/': case '?': kind = Tok::Op; break;
    case '(': kind = Tok::LParen; break;
    case ')': kind = Tok::RParen; break;
    case ',': kind = Tok::Comma; break;
    case ';': kind = Tok::Semi; break;
    case '|': kind = Tok::Bar; break;
    case '!': kind = Tok::Bang; break;
    case '=': kind = Tok::Equals; break;
    default: syntax_error(loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), 0, loc});
    advance(1);
  }
  return out;
}

class TokenStream {
public:
  TokenStream(std::span<const Token> tokens, SourceLoc end)
      : tokens_(tokens), end_(std::move(end)) {}

  [[nodiscard]] bool at_end() const { return pos_ >= tokens_.size(); }
  [[nodiscard]] const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  [[nodiscard]] bool is(Tok kind, std::string_view text = {}) const {
    const Token* t = peek();
    return t && t->kind == kind && (text.empty() || t->text == text);
  }
  const Token& next() {
    if (at_end())
      syntax_error(end_, "unexpected end of input");
    return tokens_[pos_++];
  }
  const Token& expect(Tok kind, std::string_view what) {
    if (!is(kind))
      syntax_error(loc(), "expected " + std::string(what));
    return next();
  }
  [[nodiscard]] SourceLoc loc() const { return at_end() ? end_ : tokens_[pos_].loc; }

private:
  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
  SourceLoc end_;
};

// ------------------------------------------------------------------
// expressions
// ------------------------------------------------------------------

bool is_keyword(const Token& t) {
  return t.kind == Tok::Ident && (t.text == "where" || t.text == "data");
}

bool starts_atom(const TokenStream& ts) {
  const Token* t = ts.peek();
  if (!t)
    return false;
  if (t->kind == Tok::Ident)
    return !is_keyword(*t);
  return t->kind == Tok::Number || t->kind == Tok::LParen;
}

Expr parse_expr(TokenStream& ts);

// A parenthesised group with commas splices into the enclosing application,
// so `f(a, b)` and `f a b` are the same term.
struct Atom {
  std::vector<Expr> items;
  bool tuple = false;
};

Atom parse_atom(TokenStream& ts) {
  const Token& t = ts.next();
  switch (t.kind) {
  case Tok::Number: {
    Expr e;
    e.kind = Expr::Kind::Number;
    e.value = t.value;
    e.loc = t.loc;
    return {{std::move(e)}, false};
  }
  case Tok::Ident: {
    Expr e;
    e.kind = Expr::Kind::Name;
    e.name = t.text;
    e.loc = t.loc;
    return {{std::move(e)}, false};
  }
  case Tok::LParen: {
    Atom atom;
    atom.items.push_back(parse_expr(ts));
    while (ts.is(Tok::Comma)) {
      ts.next();
      atom.items.push_back(parse_expr(ts));
      atom.tuple = true;
    }
    ts.expect(Tok::RParen, "')'");
    return atom;
  }
  default:
    syntax_error(t.loc, "unexpected '" + t.text + "'");
  }
}

Expr parse_application(TokenStream& ts) {
  SourceLoc loc = ts.loc();
  Atom head = parse_atom(ts);
  if (head.tuple)
    syntax_error(loc, "argument list without a function");
  std::vector<Expr> args;
  while (starts_atom(ts)) {
    Atom a = parse_atom(ts);
    for (auto& item : a.items)
      args.push_back(std::move(item));
  }
  if (args.empty())
    return std::move(head.items.front());
  Expr& h = head.items.front();
  if (h.kind != Expr::Kind::Name)
    syntax_error(loc, "only identifiers can be applied");
  Expr e;
  e.kind = Expr::Kind::Apply;
  e.name = h.name;
  e.args = std::move(args);
  e.loc = h.loc;
  return e;
}

Expr parse_unary(TokenStream& ts) {
  if (ts.is(Tok::Op, "-") && ts.peek(1) && ts.peek(1)->kind == Tok::Number) {
    SourceLoc loc = ts.next().loc;
    const Token& num = ts.next();
    Expr e;
    e.kind = Expr::Kind::Number;
    e.value = -num.value;
    e.loc = loc;
    return e;
  }
  return parse_application(ts);
}

Expr infix(std::string op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.kind = Expr::Kind::Infix;
  e.name = std::move(op);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.loc = std::move(loc);
  return e;
}

template <typename Next>
Expr parse_left_assoc(TokenStream& ts, std::initializer_list<std::string_view> ops, Next next) {
  Expr lhs = next(ts);
  for (;;) {
    const Token* t = ts.peek();
    if (!t || t->kind != Tok::Op ||
        std::find(ops.begin(), ops.end(), t->text) == ops.end())
      return lhs;
    Token op = ts.next();
    Expr rhs = next(ts);
    lhs = infix(op.text, std::move(lhs), std::move(rhs), op.loc);
  }
}

Expr parse_mul(TokenStream& ts) { return parse_left_assoc(ts, {"*", "/"}, parse_unary); }
Expr parse_add(TokenStream& ts) { return parse_left_assoc(ts, {"+", "-"}, parse_mul); }
Expr parse_cmp(TokenStream& ts) { return parse_left_assoc(ts, {"==", "<="}, parse_add); }

Expr parse_expr(TokenStream& ts) {
  Expr lhs = parse_cmp(ts);
  if (ts.is(Tok::Op, "?")) {
    SourceLoc loc = ts.next().loc;
    Expr rhs = parse_expr(ts);
    return infix("?", std::move(lhs), std::move(rhs), loc);
  }
  return lhs;
}

// ------------------------------------------------------------------
// patterns
// ------------------------------------------------------------------

struct RawPattern {
  enum class Kind { Wild, Name, Number, Apply };
  Kind kind = Kind::Wild;
  std::string name;
  bool strict = false;
  std::int64_t value = 0;
  std::vector<RawPattern> args;
  SourceLoc loc;
};

struct PatternAtom {
  std::vector<RawPattern> items;
  bool tuple = false;
};

RawPattern parse_pattern(TokenStream& ts);

PatternAtom parse_pattern_atom(TokenStream& ts) {
  SourceLoc loc = ts.loc();
  RawPattern p;
  p.loc = loc;
  if (ts.is(Tok::Bang)) {
    ts.next();
    const Token& id = ts.expect(Tok::Ident, "variable after '!'");
    p.kind = id.text == "_" ? RawPattern::Kind::Wild : RawPattern::Kind::Name;
    p.name = id.text;
    p.strict = true;
    return {{std::move(p)}, false};
  }
  if (ts.is(Tok::Op, "-") && ts.peek(1) && ts.peek(1)->kind == Tok::Number) {
    ts.next();
    p.kind = RawPattern::Kind::Number;
    p.value = -ts.next().value;
    return {{std::move(p)}, false};
  }
  const Token& t = ts.next();
  switch (t.kind) {
  case Tok::Number:
    p.kind = RawPattern::Kind::Number;
    p.value = t.value;
    return {{std::move(p)}, false};
  case Tok::Ident:
    p.kind = t.text == "_" ? RawPattern::Kind::Wild : RawPattern::Kind::Name;
    p.name = t.text;
    return {{std::move(p)}, false};
  case Tok::LParen: {
    PatternAtom atom;
    atom.items.push_back(parse_pattern(ts));
    while (ts.is(Tok::Comma)) {
      ts.next();
      atom.items.push_back(parse_pattern(ts));
      atom.tuple = true;
    }
    ts.expect(Tok::RParen, "')'");
    return atom;
  }
  default:
    syntax_error(t.loc, "unexpected '" + t.text + "' in pattern");
  }
}

bool starts_pattern_atom(const TokenStream& ts) {
  const Token* t = ts.peek();
  if (!t)
    return false;
  return t->kind == Tok::Ident || t->kind == Tok::Number || t->kind == Tok::LParen ||
         t->kind == Tok::Bang;
}

RawPattern parse_pattern(TokenStream& ts) {
  SourceLoc loc = ts.loc();
  PatternAtom head = parse_pattern_atom(ts);
  if (head.tuple)
    syntax_error(loc, "argument list without a constructor");
  std::vector<RawPattern> args;
  while (starts_pattern_atom(ts)) {
    PatternAtom a = parse_pattern_atom(ts);
    for (auto& item : a.items)
      args.push_back(std::move(item));
  }
  if (args.empty())
    return std::move(head.items.front());
  RawPattern& h = head.items.front();
  if (h.kind != RawPattern::Kind::Name || h.strict)
    syntax_error(loc, "only constructors can be applied in patterns");
  RawPattern p;
  p.kind = RawPattern::Kind::Apply;
  p.name = h.name;
  p.args = std::move(args);
  p.loc = h.loc;
  return p;
}

// ------------------------------------------------------------------
// resolution
// ------------------------------------------------------------------

std::string arity_message(const std::string& name, std::size_t want, std::size_t got) {
  return "'" + name + "' expects " + std::to_string(want) + " argument(s), got " +
         std::to_string(got);
}

class PatternResolver {
public:
  PatternResolver(SymbolTable& symbols, Rule& rule) : symbols_(symbols), rule_(rule) {}

  Pattern resolve(const RawPattern& raw, Path& path) {
    switch (raw.kind) {
    case RawPattern::Kind::Wild:
      return Pattern::variable(-1, raw.strict);
    case RawPattern::Kind::Number:
      return Pattern::constructor(symbols_.number(raw.value));
    case RawPattern::Kind::Name:
      if (!raw.strict) {
        if (auto id = symbols_.lookup(raw.name); id && symbols_.kind(*id) == SymbolKind::Constructor) {
          if (symbols_[*id].arity != 0)
            throw Error(ErrorKind::ArityMismatch,
                        raw.loc.str() + ": " + arity_message(raw.name, symbols_[*id].arity, 0));
          return Pattern::constructor(*id);
        }
      }
      return bind(raw, path);
    case RawPattern::Kind::Apply: {
      auto id = symbols_.lookup(raw.name);
      if (!id || symbols_.kind(*id) != SymbolKind::Constructor)
        throw Error(ErrorKind::UnknownIdentifier,
                    raw.loc.str() + ": '" + raw.name + "' is not a declared constructor");
      if (symbols_[*id].arity != raw.args.size())
        throw Error(ErrorKind::ArityMismatch,
                    raw.loc.str() + ": " +
                        arity_message(raw.name, symbols_[*id].arity, raw.args.size()));
      std::vector<Pattern> args;
      for (std::uint32_t i = 0; i < raw.args.size(); ++i) {
        path.push_back(i);
        args.push_back(resolve(raw.args[i], path));
        path.pop_back();
      }
      return Pattern::constructor(*id, std::move(args));
    }
    }
    return {};
  }

private:
  Pattern bind(const RawPattern& raw, const Path& path) {
    auto& names = rule_.var_names;
    if (std::find(names.begin(), names.end(), raw.name) != names.end())
      throw Error(ErrorKind::NonLinearLhs,
                  raw.loc.str() + ": variable '" + raw.name + "' occurs more than once");
    names.push_back(raw.name);
    rule_.var_paths.push_back(path);
    return Pattern::variable(static_cast<int>(names.size() - 1), raw.strict);
  }

  SymbolTable& symbols_;
  Rule& rule_;
};

// Resolves names in an expression. `locals` maps rule variables or
// where-bound names to slots.
class TermResolver {
public:
  TermResolver(SymbolTable& symbols, const std::unordered_map<std::string, std::uint32_t>& locals)
      : symbols_(symbols), locals_(locals) {}

  Term resolve(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Number:
      return Term::apply(symbols_.number(e.value));
    case Expr::Kind::Name: {
      if (auto it = locals_.find(e.name); it != locals_.end())
        return Term::var(it->second);
      SymbolId id = global(e);
      if (symbols_[id].arity != 0)
        throw Error(ErrorKind::ArityMismatch,
                    e.loc.str() + ": " + arity_message(e.name, symbols_[id].arity, 0));
      return Term::apply(id);
    }
    case Expr::Kind::Apply: {
      if (locals_.contains(e.name))
        throw Error(ErrorKind::ArityMismatch,
                    e.loc.str() + ": variable '" + e.name + "' cannot be applied");
      SymbolId id = global(e);
      if (symbols_[id].arity != e.args.size())
        throw Error(ErrorKind::ArityMismatch,
                    e.loc.str() + ": " + arity_message(e.name, symbols_[id].arity, e.args.size()));
      return Term::apply(id, resolve_args(e));
    }
    case Expr::Kind::Infix: {
      auto id = symbols_.lookup(e.name);
      if (!id)
        throw Error(ErrorKind::UnknownIdentifier, e.loc.str() + ": operator " + e.name);
      return Term::apply(*id, resolve_args(e));
    }
    }
    return {};
  }

private:
  std::vector<Term> resolve_args(const Expr& e) {
    std::vector<Term> out;
    for (const auto& a : e.args)
      out.push_back(resolve(a));
    return out;
  }

  SymbolId global(const Expr& e) {
    auto id = symbols_.lookup(e.name);
    if (!id)
      throw Error(ErrorKind::UnknownIdentifier, e.loc.str() + ": unknown identifier '" + e.name + "'");
    auto k = symbols_.kind(*id);
    if (k != SymbolKind::Constructor && k != SymbolKind::Operation && k != SymbolKind::Fail)
      throw Error(ErrorKind::UnknownIdentifier, e.loc.str() + ": '" + e.name + "' is not a term");
    return *id;
  }

  SymbolTable& symbols_;
  const std::unordered_map<std::string, std::uint32_t>& locals_;
};

// ------------------------------------------------------------------
// declarations
// ------------------------------------------------------------------

struct Declaration {
  std::vector<Token> tokens;
  SourceLoc end;
};

std::vector<Declaration> split_declarations(const SourceText& src) {
  std::vector<Token> tokens = lex(src.name, src.text);
  std::vector<Declaration> decls;
  for (auto& t : tokens) {
    if (decls.empty() || t.loc.column == 1)
      decls.push_back({});
    decls.back().tokens.push_back(std::move(t));
  }
  for (auto& d : decls) {
    const auto& last = d.tokens.back().loc;
    d.end = {last.source, last.line, last.column + 1};
  }
  return decls;
}

void parse_data(const Declaration& decl, Program& program) {
  TokenStream ts(decl.tokens, decl.end);
  ts.next(); // data
  DataDecl data;
  data.type_name = ts.expect(Tok::Ident, "type name").text;
  while (ts.is(Tok::Ident))
    ts.next();
  ts.expect(Tok::Equals, "'=' in data declaration");
  for (;;) {
    const Token& ctor = ts.expect(Tok::Ident, "constructor name");
    std::size_t arity = 0;
    while (!ts.at_end() && !ts.is(Tok::Bar)) {
      if (ts.is(Tok::Ident)) {
        ts.next();
      } else if (ts.is(Tok::LParen)) {
        int depth = 0;
        do {
          const Token& t = ts.next();
          if (t.kind == Tok::LParen)
            ++depth;
          else if (t.kind == Tok::RParen)
            --depth;
        } while (depth > 0);
      } else {
        syntax_error(ts.loc(), "unexpected token in constructor declaration");
      }
      ++arity;
    }
    try {
      data.constructors.push_back(program.symbols->intern(ctor.text, SymbolKind::Constructor, arity));
    } catch (const Error& err) {
      throw Error(err.kind(), ctor.loc.str() + ": " + err.what());
    }
    if (ts.at_end())
      break;
    ts.next(); // |
  }
  program.data.push_back(std::move(data));
}

struct RawRule {
  std::string op;
  SourceLoc loc;
  std::vector<RawPattern> lhs;
  Expr rhs;
};

RawRule parse_rule(const Declaration& decl) {
  TokenStream ts(decl.tokens, decl.end);
  RawRule rule;
  const Token& head = ts.expect(Tok::Ident, "operation name");
  rule.op = head.text;
  rule.loc = head.loc;
  if (rule.op == "_")
    syntax_error(head.loc, "'_' cannot be defined");
  while (!ts.is(Tok::Equals)) {
    if (ts.at_end())
      syntax_error(ts.loc(), "expected '=' in rule");
    PatternAtom a = parse_pattern_atom(ts);
    for (auto& item : a.items)
      rule.lhs.push_back(std::move(item));
  }
  ts.next();
  rule.rhs = parse_expr(ts);
  if (!ts.at_end()) {
    if (ts.peek()->kind == Tok::Ident && ts.peek()->text == "where")
      syntax_error(ts.loc(), "'where' is only allowed in goals");
    syntax_error(ts.loc(), "unexpected '" + ts.peek()->text + "'");
  }
  return rule;
}

} // namespace

Program parse_program(std::span<const SourceText> sources, std::shared_ptr<SymbolTable> symbols) {
  Program program;
  program.symbols = symbols ? std::move(symbols) : std::make_shared<SymbolTable>();
  SymbolTable& table = *program.symbols;

  std::vector<Declaration> decls;
  for (const auto& src : sources)
    for (auto& d : split_declarations(src))
      decls.push_back(std::move(d));

  std::vector<const Declaration*> rule_decls;
  for (const auto& d : decls) {
    if (d.tokens.front().kind == Tok::Ident && d.tokens.front().text == "data")
      parse_data(d, program);
    else
      rule_decls.push_back(&d);
  }

  std::vector<RawRule> raw;
  for (const auto* d : rule_decls)
    raw.push_back(parse_rule(*d));

  for (const auto& r : raw) {
    if (auto id = table.lookup(r.op); id && table.kind(*id) == SymbolKind::Operation &&
                                      table[*id].arity != r.lhs.size())
      throw Error(ErrorKind::ArityMismatch,
                  r.loc.str() + ": rules for '" + r.op + "' disagree on arity (" +
                      std::to_string(table[*id].arity) + " vs " + std::to_string(r.lhs.size()) + ")");
    SymbolId op;
    try {
      op = table.intern(r.op, SymbolKind::Operation, r.lhs.size());
    } catch (const Error& err) {
      throw Error(err.kind(), r.loc.str() + ": " + err.what());
    }
    if (!program.rules_of.contains(op))
      program.operations.push_back(op);
    program.rules_of[op];
  }

  for (const auto& r : raw) {
    Rule rule;
    rule.op = *table.lookup(r.op);
    rule.loc = r.loc;
    PatternResolver patterns(table, rule);
    for (std::uint32_t i = 0; i < r.lhs.size(); ++i) {
      Path path{i};
      rule.lhs.push_back(patterns.resolve(r.lhs[i], path));
    }
    std::unordered_map<std::string, std::uint32_t> locals;
    for (std::uint32_t s = 0; s < rule.var_names.size(); ++s)
      locals.emplace(rule.var_names[s], s);
    rule.rhs = TermResolver(table, locals).resolve(r.rhs);
    program.rules_of[rule.op].push_back(program.rules.size());
    program.rules.push_back(std::move(rule));
  }
  return program;
}

Program parse_program(std::string_view text, std::string_view source_name) {
  SourceText src{std::string(source_name), std::string(text)};
  return parse_program(std::span<const SourceText>(&src, 1));
}

namespace {

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Name || e.kind == Expr::Kind::Apply)
    out.insert(e.name);
  for (const auto& a : e.args)
    collect_names(a, out);
}

} // namespace

GoalAst parse_goal(std::string_view text) {
  auto tokens = lex("<goal>", text);
  SourceLoc end{"<goal>", 1, static_cast<int>(text.size()) + 1};
  TokenStream ts(tokens, end);
  GoalAst goal;
  goal.body = parse_expr(ts);
  if (ts.is(Tok::Ident, "where")) {
    ts.next();
    do {
      if (ts.is(Tok::Comma) || ts.is(Tok::Semi))
        ts.next();
      const Token& name = ts.expect(Tok::Ident, "name after 'where'");
      if (name.text == "_" || is_keyword(name))
        syntax_error(name.loc, "'" + name.text + "' cannot be bound");
      for (const auto& b : goal.bindings)
        if (b.name == name.text)
          syntax_error(name.loc, "'" + name.text + "' is bound twice");
      ts.expect(Tok::Equals, "'=' in where binding");
      goal.bindings.push_back({name.text, parse_expr(ts), name.loc});
    } while (ts.is(Tok::Comma) || ts.is(Tok::Semi));
  }
  if (!ts.at_end())
    syntax_error(ts.loc(), "unexpected '" + ts.peek()->text + "'");

  // Bindings may reference each other, but not cyclically.
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < goal.bindings.size(); ++i)
    index.emplace(goal.bindings[i].name, i);
  std::vector<std::vector<std::size_t>> deps(goal.bindings.size());
  for (std::size_t i = 0; i < goal.bindings.size(); ++i) {
    std::set<std::string> names;
    collect_names(goal.bindings[i].expr, names);
    for (const auto& n : names)
      if (auto it = index.find(n); it != index.end())
        deps[i].push_back(it->second);
  }
  std::vector<int> state(goal.bindings.size(), 0);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (state[i] == 2)
      return;
    if (state[i] == 1)
      throw Error(ErrorKind::UnboundWhereName,
                  goal.bindings[i].loc.str() + ": '" + goal.bindings[i].name +
                      "' is defined in terms of itself");
    state[i] = 1;
    for (auto d : deps[i])
      visit(d);
    state[i] = 2;
  };
  for (std::size_t i = 0; i < goal.bindings.size(); ++i)
    visit(i);
  return goal;
}

ResolvedGoal resolve_goal(const GoalAst& goal, const Program& program) {
  ResolvedGoal out;
  std::unordered_map<std::string, std::uint32_t> locals;
  for (std::uint32_t i = 0; i < goal.bindings.size(); ++i) {
    locals.emplace(goal.bindings[i].name, i);
    out.names.push_back(goal.bindings[i].name);
  }
  TermResolver resolver(*program.symbols, locals);
  out.body = resolver.resolve(goal.body);
  for (const auto& b : goal.bindings)
    out.bindings.push_back(resolver.resolve(b.expr));
  return out;
}

Graph build_graph(const ResolvedGoal& goal, std::shared_ptr<SymbolTable> symbols) {
  Graph g(std::move(symbols));
  std::vector<NodeId> slot_node(goal.bindings.size(), kNoNode);
  std::vector<int> state(goal.bindings.size(), 0);
  std::function<NodeId(const Term&)> build = [&](const Term& t) -> NodeId {
    if (t.kind == Term::Kind::Var) {
      auto s = t.slot;
      if (state.at(s) == 1)
        throw Error(ErrorKind::UnboundWhereName, "'" + goal.names.at(s) + "' is cyclic");
      if (state[s] == 0) {
        state[s] = 1;
        slot_node[s] = build(goal.bindings[s]);
        state[s] = 2;
      }
      return slot_node[s];
    }
    std::vector<NodeId> args;
    for (const auto& a : t.args)
      args.push_back(build(a));
    return g.add_node(t.symbol, args);
  };
  g.set_root(build(goal.body));
  return g;
}

Graph build_graph(const GoalAst& goal, const Program& program) {
  return build_graph(resolve_goal(goal, program), program.symbols);
}

std::string print_with_sharing(const Graph& g) {
  const auto& symbols = g.symbols();
  std::vector<NodeId> shared;
  for (NodeId n : g.reachable())
    if (g.backpointers(n).size() > 1)
      shared.push_back(n);
  auto is_shared = [&](NodeId n) {
    return std::binary_search(shared.begin(), shared.end(), n);
  };
  std::function<std::string(NodeId, bool)> text = [&](NodeId n, bool expand) -> std::string {
    if (!expand && is_shared(n))
      return "S" + std::to_string(n);
    const Symbol& s = symbols[g.label(n)];
    const auto& args = g.args(n);
    if (s.kind == SymbolKind::Number)
      return s.value < 0 ? "(" + s.name + ")" : s.name;
    if ((s.builtin != Builtin::None || s.kind == SymbolKind::Choice) && args.size() == 2)
      return "(" + text(args[0], false) + " " + s.name + " " + text(args[1], false) + ")";
    if (s.kind == SymbolKind::Choice) {
      std::string out = text(args.back(), false);
      for (std::size_t i = args.size() - 1; i-- > 0;)
        out = "(" + text(args[i], false) + " ? " + out + ")";
      return out;
    }
    if (args.empty())
      return s.name;
    std::string out = s.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i)
      out += (i ? ", " : "") + text(args[i], false);
    return out + ")";
  };
  std::string out = text(g.root(), true);
  for (std::size_t i = 0; i < shared.size(); ++i)
    out += (i ? ", " : " where ") + ("S" + std::to_string(shared[i])) + " = " +
           text(shared[i], true);
  return out;
}

} // namespace bfl
