#include "bubblefl/oracle.hpp"

#include "bubblefl/error.hpp"
#include "bubblefl/parser.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

namespace bfl {

DominatorResult brute_dominator(const Graph& g, NodeId x) {
  x = g.resolved(x);
  if (x == g.root())
    throw Error(ErrorKind::IsRoot, "#" + std::to_string(x) + " is the root");
  if (g.reachable().size() > kBruteForceLimit)
    throw Error(ErrorKind::TooLarge, "more than " + std::to_string(kBruteForceLimit) +
                                         " reachable nodes");

  std::vector<std::vector<NodeId>> paths;
  PathsToRoot enumerator(g, x);
  while (auto p = enumerator.next())
    paths.push_back(std::move(*p));

  std::set<NodeId> common(paths.front().begin(), paths.front().end());
  for (const auto& p : paths) {
    std::set<NodeId> here(p.begin(), p.end());
    std::set<NodeId> next;
    std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                          std::inserter(next, next.begin()));
    common = std::move(next);
  }

  // Shortest distances from the root.
  std::unordered_map<NodeId, int> dist{{g.root(), 0}};
  std::vector<NodeId> layer{g.root()};
  for (int d = 1; !layer.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId n : layer)
      for (NodeId c : g.args(n))
        if (dist.emplace(c, d).second)
          next.push_back(c);
    layer = std::move(next);
  }
  NodeId a = *std::max_element(common.begin(), common.end(),
                               [&](NodeId l, NodeId r) { return dist.at(l) < dist.at(r); });

  std::set<NodeId> ap;
  for (const auto& p : paths)
    for (NodeId n : p) {
      ap.insert(n);
      if (n == a)
        break;
    }
  return {a, {ap.begin(), ap.end()}};
}

namespace {

bool contains_choice(const Term& t, SymbolId choice) {
  if (t.kind == Term::Kind::Apply && t.symbol == choice)
    return true;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return contains_choice(a, choice); });
}

bool folds_rules(const DefTree& t) {
  if (t.kind == DefTree::Kind::Leaf)
    return t.rules.size() > 1;
  if (t.default_child && folds_rules(*t.default_child))
    return true;
  return std::any_of(t.children.begin(), t.children.end(), folds_rules);
}

void collect_operations(const Term& t, const SymbolTable& symbols, std::vector<SymbolId>& out) {
  if (t.kind == Term::Kind::Apply && symbols.kind(t.symbol) == SymbolKind::Operation &&
      symbols[t.symbol].builtin == Builtin::None)
    out.push_back(t.symbol);
  for (const auto& a : t.args)
    collect_operations(a, symbols, out);
}

void check_static(const Program& program, const DefTreeMap& trees, const ResolvedGoal& goal) {
  const auto& symbols = *program.symbols;
  std::vector<SymbolId> work;
  collect_operations(goal.body, symbols, work);
  for (const auto& b : goal.bindings)
    collect_operations(b, symbols, work);
  std::set<SymbolId> seen;
  while (!work.empty()) {
    SymbolId op = work.back();
    work.pop_back();
    if (!seen.insert(op).second)
      continue;
    if (folds_rules(trees.at(op)))
      throw Error(ErrorKind::NotStaticallyEnumerable,
                  "'" + symbols.name(op) + "' has overlapping rules");
    for (auto r : program.rules_of.at(op)) {
      const Rule& rule = program.rules[r];
      if (contains_choice(rule.rhs, symbols.choice()))
        throw Error(ErrorKind::NotStaticallyEnumerable,
                    rule.loc.str() + ": '" + symbols.name(op) + "' introduces a choice");
      collect_operations(rule.rhs, symbols, work);
    }
  }
}

struct ChoiceSite {
  int binding; // -1 for the body
  Path path;
};

class Finder {
public:
  Finder(const ResolvedGoal& goal, SymbolId choice)
      : goal_(goal), choice_(choice), visited_(goal.bindings.size(), false) {}

  std::optional<ChoiceSite> find() {
    Path path;
    return visit(goal_.body, -1, path);
  }

private:
  std::optional<ChoiceSite> visit(const Term& t, int binding, Path& path) {
    if (t.kind == Term::Kind::Var) {
      if (visited_[t.slot])
        return std::nullopt;
      visited_[t.slot] = true;
      Path inner;
      return visit(goal_.bindings[t.slot], static_cast<int>(t.slot), inner);
    }
    if (t.symbol == choice_)
      return ChoiceSite{binding, path};
    for (std::uint32_t i = 0; i < t.args.size(); ++i) {
      path.push_back(i);
      auto found = visit(t.args[i], binding, path);
      path.pop_back();
      if (found)
        return found;
    }
    return std::nullopt;
  }

  const ResolvedGoal& goal_;
  SymbolId choice_;
  std::vector<bool> visited_;
};

Term& term_at(ResolvedGoal& goal, const ChoiceSite& site) {
  Term* t = site.binding < 0 ? &goal.body : &goal.bindings[static_cast<std::size_t>(site.binding)];
  for (auto i : site.path)
    t = &t->args[i];
  return *t;
}

Term inline_bindings(const Term& t, const ResolvedGoal& goal) {
  if (t.kind == Term::Kind::Var)
    return inline_bindings(goal.bindings.at(t.slot), goal);
  Term out = Term::apply(t.symbol);
  for (const auto& a : t.args)
    out.args.push_back(inline_bindings(a, goal));
  return out;
}

} // namespace

std::vector<Outcome> enumerate_by_substitution(const Program& program, const DefTreeMap& trees,
                                               const GoalAst& goal, SubstitutionOptions options,
                                               EngineStats* stats) {
  ResolvedGoal resolved = resolve_goal(goal, program);
  check_static(program, trees, resolved);
  if (options.duplicate) {
    resolved.body = inline_bindings(resolved.body, resolved);
    resolved.bindings.clear();
    resolved.names.clear();
  }

  EngineOptions eo;
  eo.mode = options.mode;
  eo.budget = options.budget;
  eo.deterministic_only = true;
  const SymbolId choice = program.symbols->choice();

  std::vector<Outcome> out;
  EngineStats total;
  std::vector<ResolvedGoal> work{std::move(resolved)};
  while (!work.empty()) {
    ResolvedGoal cur = std::move(work.back());
    work.pop_back();
    auto site = Finder(cur, choice).find();
    if (!site) {
      Engine engine(program, trees, eo);
      for (auto& o : engine.enumerate(build_graph(cur, program.symbols)))
        out.push_back(std::move(o));
      total += engine.stats();
      continue;
    }
    // Pushed in reverse so the leftmost alternative is evaluated first.
    std::vector<Term> alts = term_at(cur, *site).args;
    for (auto it = alts.rbegin(); it != alts.rend(); ++it) {
      ResolvedGoal next = cur;
      term_at(next, *site) = *it;
      work.push_back(std::move(next));
    }
  }
  if (stats)
    *stats = total;
  return out;
}

} // namespace bfl
