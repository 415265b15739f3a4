#include "bubblefl/deftree.hpp"

#include "bubblefl/error.hpp"

#include <algorithm>
#include <limits>

namespace bfl {

namespace {

const Pattern& pattern_at(const std::vector<Pattern>& args, const Path& path) {
  const Pattern* p = &args.at(path.front());
  for (std::size_t i = 1; i < path.size(); ++i)
    p = &p->args.at(path[i]);
  return *p;
}

Pattern& pattern_at(std::vector<Pattern>& args, const Path& path) {
  return const_cast<Pattern&>(pattern_at(std::as_const(args), path));
}

void variable_positions(const Pattern& p, Path& path, std::vector<Path>& out) {
  if (p.kind == Pattern::Kind::Variable) {
    out.push_back(path);
    return;
  }
  for (std::uint32_t i = 0; i < p.args.size(); ++i) {
    path.push_back(i);
    variable_positions(p.args[i], path, out);
    path.pop_back();
  }
}

std::vector<Path> variable_positions(const std::vector<Pattern>& args) {
  std::vector<Path> out;
  Path path;
  for (std::uint32_t i = 0; i < args.size(); ++i) {
    path.push_back(i);
    variable_positions(args[i], path, out);
    path.pop_back();
  }
  return out;
}

// True when `rule` equals `pat` up to renaming. `rule` is known to be an
// instance of `pat`.
bool is_variant(const Pattern& pat, const Pattern& rule) {
  if (pat.kind == Pattern::Kind::Variable)
    return rule.kind == Pattern::Kind::Variable && rule.strict == pat.strict;
  if (rule.kind != Pattern::Kind::Constructor || rule.symbol != pat.symbol)
    return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i)
    if (!is_variant(pat.args[i], rule.args[i]))
      return false;
  return true;
}

std::string overlap_message(const Program& program, std::span<const std::size_t> rules) {
  std::string out = "rules for '" + program.symbols->name(program.rules[rules.front()].op) +
                    "' overlap without being variants:";
  for (auto r : rules)
    out += "\n  " + program.rules[r].loc.str() + ": " + format_rule(program.rules[r], *program.symbols);
  return out;
}

class TreeBuilder {
public:
  explicit TreeBuilder(const Program& program) : program_(program) {}

  DefTree build(std::vector<std::size_t> rules, std::vector<Pattern> pattern) {
    DefTree tree;
    tree.op = program_.rules[rules.front()].op;
    tree.pattern = std::move(pattern);
    auto lhs = [&](std::size_t r) -> const std::vector<Pattern>& { return program_.rules[r].lhs; };

    bool leaf = std::all_of(rules.begin(), rules.end(), [&](std::size_t r) {
      for (std::size_t i = 0; i < tree.pattern.size(); ++i)
        if (!is_variant(tree.pattern[i], lhs(r)[i]))
          return false;
      return true;
    });
    if (leaf) {
      tree.rules = std::move(rules);
      return tree;
    }

    for (const Path& pos : variable_positions(tree.pattern)) {
      if (pattern_at(tree.pattern, pos).strict)
        continue;
      std::size_t ctors = 0;
      std::size_t bangs = 0;
      for (auto r : rules) {
        const Pattern& sub = pattern_at(lhs(r), pos);
        if (sub.kind == Pattern::Kind::Constructor)
          ++ctors;
        else if (sub.strict)
          ++bangs;
      }
      if (ctors == rules.size()) {
        branch_on_constructors(tree, rules, pos);
        return tree;
      }
      if (bangs == rules.size()) {
        tree.kind = DefTree::Kind::Branch;
        tree.position = pos;
        auto child = tree.pattern;
        pattern_at(child, pos).strict = true;
        tree.default_child = std::make_unique<DefTree>(build(rules, std::move(child)));
        return tree;
      }
    }
    throw Error(ErrorKind::NotInductivelySequential, overlap_message(program_, rules));
  }

  int fresh() { return next_var_++; }

private:
  void branch_on_constructors(DefTree& tree, const std::vector<std::size_t>& rules,
                              const Path& pos) {
    tree.kind = DefTree::Kind::Branch;
    tree.position = pos;
    for (auto r : rules) {
      SymbolId key = pattern_at(program_.rules[r].lhs, pos).symbol;
      if (std::find(tree.keys.begin(), tree.keys.end(), key) == tree.keys.end())
        tree.keys.push_back(key);
    }
    for (SymbolId key : tree.keys) {
      std::vector<std::size_t> subset;
      for (auto r : rules)
        if (pattern_at(program_.rules[r].lhs, pos).symbol == key)
          subset.push_back(r);
      auto child = tree.pattern;
      std::vector<Pattern> vars;
      for (std::size_t i = 0; i < (*program_.symbols)[key].arity; ++i)
        vars.push_back(Pattern::variable(fresh()));
      pattern_at(child, pos) = Pattern::constructor(key, std::move(vars));
      tree.children.push_back(build(std::move(subset), std::move(child)));
    }
  }

  const Program& program_;
  int next_var_ = 1;
};

std::string path_text(const Path& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i)
    out += (i ? "." : "") + std::to_string(p[i] + 1);
  return out;
}

std::string pattern_text(const Pattern& p, const SymbolTable& symbols) {
  if (p.kind == Pattern::Kind::Variable)
    return (p.strict ? "!X" : "X") + std::to_string(p.slot);
  if (p.args.empty())
    return format_pattern(p, symbols, {});
  std::string out = symbols.name(p.symbol) + "(";
  for (std::size_t i = 0; i < p.args.size(); ++i)
    out += (i ? ", " : "") + pattern_text(p.args[i], symbols);
  return out + ")";
}

std::string head_text(const DefTree& t, const SymbolTable& symbols) {
  std::string out = symbols.name(t.op);
  if (t.pattern.empty())
    return out;
  out += "(";
  for (std::size_t i = 0; i < t.pattern.size(); ++i)
    out += (i ? ", " : "") + pattern_text(t.pattern[i], symbols);
  return out + ")";
}

void dump(const DefTree& t, const Program& program, int indent, std::string& out) {
  const auto& symbols = *program.symbols;
  out += std::string(static_cast<std::size_t>(indent) * 2, ' ') + head_text(t, symbols);
  if (t.kind == DefTree::Kind::Branch) {
    out += " [pos " + path_text(t.position) + "]\n";
    for (const auto& c : t.children)
      dump(c, program, indent + 1, out);
    if (t.default_child)
      dump(*t.default_child, program, indent + 1, out);
    return;
  }
  out += " =>";
  for (std::size_t i = 0; i < t.rules.size(); ++i) {
    const Rule& rule = program.rules[t.rules[i]];
    std::vector<std::string> names;
    for (const auto& path : rule.var_paths)
      names.push_back("X" + std::to_string(pattern_at(t.pattern, path).slot));
    out += (i ? " ? " : " ") + format_term(rule.rhs, symbols, names);
  }
  out += '\n';
}

NodeId node_at(const Graph& g, NodeId redex, const Path& path) {
  NodeId cur = redex;
  for (auto i : path)
    cur = g.resolved(g.args(cur).at(i));
  return cur;
}

bool demands_step(SymbolKind k) { return k == SymbolKind::Operation || k == SymbolKind::Choice; }

} // namespace

DefTree build_deftree(const Program& program, std::span<const std::size_t> rules) {
  if (rules.empty())
    throw Error(ErrorKind::InvariantViolation, "definitional tree without rules");
  TreeBuilder builder(program);
  std::vector<Pattern> root;
  for (std::size_t i = 0; i < program.rules[rules.front()].lhs.size(); ++i)
    root.push_back(Pattern::variable(builder.fresh()));
  return builder.build({rules.begin(), rules.end()}, std::move(root));
}

DefTreeMap build_all(const Program& program) {
  DefTreeMap out;
  for (SymbolId op : program.operations)
    out.emplace(op, build_deftree(program, program.rules_of.at(op)));
  return out;
}

std::string dump_tree(const DefTree& tree, const Program& program) {
  std::string out;
  dump(tree, program, 0, out);
  return out;
}

std::vector<NodeId> bind_variables(const Graph& g, NodeId redex, const Rule& rule) {
  std::vector<NodeId> out;
  out.reserve(rule.var_paths.size());
  for (const auto& path : rule.var_paths)
    out.push_back(node_at(g, redex, path));
  return out;
}

Decision match_step(const Graph& g, NodeId redex, const DefTree& tree, const Program& program) {
  redex = g.resolved(redex);
  const DefTree* t = &tree;
  Decision d;
  while (t->kind == DefTree::Kind::Branch) {
    NodeId n = node_at(g, redex, t->position);
    SymbolKind k = g.kind(n);
    if (k == SymbolKind::Fail)
      return d;
    if (demands_step(k)) {
      d.kind = Decision::Kind::NeedStep;
      d.positions.push_back(n);
      return d;
    }
    if (k == SymbolKind::Variable)
      return d;
    auto it = std::find(t->keys.begin(), t->keys.end(), g.label(n));
    if (it != t->keys.end())
      t = &t->children[static_cast<std::size_t>(it - t->keys.begin())];
    else if (t->default_child)
      t = t->default_child.get();
    else
      return d;
  }
  d.kind = Decision::Kind::RewriteTo;
  d.leaf = t;
  for (auto r : t->rules)
    d.bindings.push_back(bind_variables(g, redex, program.rules[r]));
  return d;
}

Decision match_builtin(const Graph& g, NodeId redex) {
  redex = g.resolved(redex);
  auto& symbols = g.symbols();
  const Symbol& op = symbols[g.label(redex)];
  NodeId a = g.resolved(g.args(redex).at(0));
  NodeId b = g.resolved(g.args(redex).at(1));
  Decision d;
  if (g.kind(a) == SymbolKind::Fail || g.kind(b) == SymbolKind::Fail)
    return d;
  for (NodeId n : {a, b})
    if (demands_step(g.kind(n)) &&
        std::find(d.positions.begin(), d.positions.end(), n) == d.positions.end())
      d.positions.push_back(n);
  if (!d.positions.empty()) {
    d.kind = Decision::Kind::NeedStep;
    return d;
  }
  if (g.kind(a) != SymbolKind::Number || g.kind(b) != SymbolKind::Number)
    return d;

  std::int64_t x = symbols[g.label(a)].value;
  std::int64_t y = symbols[g.label(b)].value;
  std::int64_t r = 0;
  bool overflow = false;
  d.kind = Decision::Kind::Compute;
  switch (op.builtin) {
  case Builtin::Add: overflow = __builtin_add_overflow(x, y, &r); break;
  case Builtin::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
  case Builtin::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
  case Builtin::Div:
    if (y == 0) {
      d.kind = Decision::Kind::FailMatch;
      return d;
    }
    overflow = x == std::numeric_limits<std::int64_t>::min() && y == -1;
    if (!overflow)
      r = x / y;
    break;
  case Builtin::Eq:
    d.result = x == y ? symbols.true_ctor() : symbols.false_ctor();
    return d;
  case Builtin::Leq:
    d.result = x <= y ? symbols.true_ctor() : symbols.false_ctor();
    return d;
  case Builtin::None:
    throw Error(ErrorKind::InvariantViolation, "'" + op.name + "' is not a builtin");
  }
  if (overflow)
    throw Error(ErrorKind::ArithmeticOverflow,
                std::to_string(x) + " " + op.name + " " + std::to_string(y));
  d.result = symbols.number(r);
  return d;
}

} // namespace bfl
