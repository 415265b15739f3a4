#include "bubblefl/engine.hpp"

#include "bubblefl/error.hpp"
#include "bubblefl/parser.hpp"

#include <algorithm>
#include <deque>

namespace bfl {

std::string to_string(const Outcome& o) {
  switch (o.kind) {
  case Outcome::Kind::Value: return "value: " + o.term;
  case Outcome::Kind::Failure: return "failure";
  case Outcome::Kind::BudgetExhausted: return "exhausted";
  }
  return {};
}

EngineStats& EngineStats::operator+=(const EngineStats& o) {
  rounds += o.rounds;
  rewrites += o.rewrites;
  bubblings += o.bubblings;
  bubbling_copied += o.bubbling_copied;
  fork_copied += o.fork_copied;
  peak_nodes = std::max(peak_nodes, o.peak_nodes);
  return *this;
}

Engine::Engine(const Program& program, const DefTreeMap& trees, EngineOptions options)
    : program_(program), trees_(trees), options_(std::move(options)) {}

NodeId Engine::instantiate_rhs(Graph& g, const Term& rhs, std::span<const NodeId> bindings) {
  if (rhs.kind == Term::Kind::Var)
    return g.resolve(bindings[rhs.slot]);
  std::vector<NodeId> args;
  args.reserve(rhs.args.size());
  for (const auto& a : rhs.args)
    args.push_back(instantiate_rhs(g, a, bindings));
  return g.add_node(rhs.symbol, args);
}

StepReport Engine::step(Graph& g, NodeId t, Mode m) {
  Round r{g, {}, {}};
  step_node(r, t, m);
  return r.report;
}

void Engine::step_node(Round& r, NodeId t, Mode m) {
  Graph& g = r.g;
  t = g.resolve(t);
  if (!g.is_live(t) || !r.touched.insert(t).second)
    return;
  switch (g.kind(t)) {
  case SymbolKind::Fail:
  case SymbolKind::Number:
  case SymbolKind::Variable:
    return;
  case SymbolKind::Constructor:
    if (m == Mode::NormalForm)
      step_constructor(r, t);
    return;
  case SymbolKind::Operation:
    step_operation(r, t);
    return;
  case SymbolKind::Choice:
    if (options_.deterministic_only)
      throw Error(ErrorKind::InvariantViolation, "choice #" + std::to_string(t) +
                                                     " reached in a deterministic evaluation");
    r.report += code_choice(
        g, t, options_.strategy, [&](NodeId c) { step_node(r, c, Mode::HeadNormalForm); },
        options_.on_bubble);
    return;
  }
}

void Engine::step_constructor(Round& r, NodeId t) {
  Graph& g = r.g;
  if (g.normal_form(t))
    return;
  // Maximal non-constructor positions, leftmost-outermost.
  std::vector<NodeId> ops;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> work(g.args(t).rbegin(), g.args(t).rend());
  while (!work.empty()) {
    NodeId n = work.back();
    work.pop_back();
    if (!seen.insert(n).second)
      continue;
    if (!g.symbols().is_constructor_like(g.label(n))) {
      ops.push_back(n);
      continue;
    }
    if (g.entry(n).nf)
      continue;
    for (auto it = g.args(n).rbegin(); it != g.args(n).rend(); ++it)
      work.push_back(*it);
  }
  if (std::any_of(ops.begin(), ops.end(), [&](NodeId n) { return g.kind(n) == SymbolKind::Fail; })) {
    g.overwrite(t, g.symbols().fail(), {});
    ++r.report.rewrites;
    return;
  }
  for (NodeId n : ops)
    step_node(r, n, Mode::NormalForm);
}

void Engine::step_operation(Round& r, NodeId t) {
  Graph& g = r.g;
  const Symbol& sym = g.symbols()[g.label(t)];
  Decision d;
  if (sym.builtin != Builtin::None) {
    d = match_builtin(g, t);
  } else {
    auto it = trees_.find(g.label(t));
    if (it == trees_.end())
      throw Error(ErrorKind::UnknownIdentifier, "no rules for '" + sym.name + "'");
    d = match_step(g, t, it->second, program_);
  }
  switch (d.kind) {
  case Decision::Kind::RewriteTo:
    rewrite_leaf(r, t, d);
    return;
  case Decision::Kind::Compute:
    g.overwrite(t, d.result, {});
    ++r.report.rewrites;
    return;
  case Decision::Kind::FailMatch:
    g.overwrite(t, g.symbols().fail(), {});
    ++r.report.rewrites;
    return;
  case Decision::Kind::NeedStep:
    for (NodeId p : d.positions)
      step_node(r, p, Mode::HeadNormalForm);
    return;
  }
}

void Engine::rewrite_leaf(Round& r, NodeId t, const Decision& d) {
  Graph& g = r.g;
  const auto first_fresh = static_cast<NodeId>(g.size());
  NodeId target;
  if (d.leaf->rules.size() == 1) {
    target = instantiate_rhs(g, program_.rules[d.leaf->rules[0]].rhs, d.bindings[0]);
  } else {
    std::vector<NodeId> alts;
    for (std::size_t i = 0; i < d.leaf->rules.size(); ++i)
      alts.push_back(instantiate_rhs(g, program_.rules[d.leaf->rules[i]].rhs, d.bindings[i]));
    target = g.add_node(g.symbols().choice(), alts);
  }
  if (target >= first_fresh) {
    const std::vector<NodeId> args = g.args(target);
    g.overwrite(t, g.label(target), args);
    g.discard(target);
  } else {
    g.redirect(t, target);
  }
  ++r.report.rewrites;
}

void Engine::verify(const Graph& g, const char* when) const {
  if (!options_.check_invariants)
    return;
  auto report = g.check_invariants();
  if (!report.ok())
    throw Error(ErrorKind::InvariantViolation,
                std::string("after ") + when + ":\n" + report.str() + g.dump());
}

std::vector<Outcome> Engine::enumerate(Graph initial) {
  std::vector<Outcome> out;
  std::size_t values = 0;
  struct Alternative {
    Graph g;
    std::size_t id;
  };
  std::deque<Alternative> frontier;
  std::size_t next_id = 0;
  verify(initial, "graph construction");
  stats_.peak_nodes = std::max(stats_.peak_nodes, initial.size());
  frontier.push_back({std::move(initial), next_id++});

  while (!frontier.empty()) {
    if (options_.first && values >= *options_.first)
      break;
    auto [g, id] = std::move(frontier.front());
    frontier.pop_front();
    NodeId root = g.root();
    SymbolKind k = g.kind(root);

    if (k == SymbolKind::Fail) {
      out.push_back(Outcome::failure());
      continue;
    }
    if (g.symbols().is_constructor_like(g.label(root)) &&
        (options_.mode == Mode::HeadNormalForm || g.normal_form(root))) {
      out.push_back(Outcome::value(options_.mode == Mode::NormalForm ? print_value(g, root)
                                                                     : print_term(g, root)));
      ++values;
      continue;
    }
    if (stats_.rounds >= options_.budget) {
      out.push_back(Outcome::exhausted());
      continue;
    }
    if (k == SymbolKind::Choice) {
      if (options_.deterministic_only)
        throw Error(ErrorKind::InvariantViolation, "choice at the root of a deterministic goal");
      std::vector<NodeId> alts;
      std::vector<NodeId> work(g.args(root).rbegin(), g.args(root).rend());
      while (!work.empty()) {
        NodeId c = work.back();
        work.pop_back();
        if (g.kind(c) == SymbolKind::Choice) {
          for (auto it = g.args(c).rbegin(); it != g.args(c).rend(); ++it)
            work.push_back(*it);
          continue;
        }
        alts.push_back(c);
      }
      for (NodeId c : alts) {
        std::size_t copied = 0;
        Graph alt = g.extract(c, &copied);
        stats_.fork_copied += copied;
        verify(alt, "fork");
        frontier.push_back({std::move(alt), next_id++});
      }
      continue;
    }

    if (options_.on_round)
      options_.on_round(id);
    Round r{g, {}, {}};
    step_node(r, root, options_.mode);
    ++stats_.rounds;
    stats_.rewrites += r.report.rewrites;
    stats_.bubblings += r.report.bubblings;
    stats_.bubbling_copied += r.report.bubble_copies;
    stats_.peak_nodes = std::max(stats_.peak_nodes, g.size());
    for (std::size_t i = 0; i < r.report.failures; ++i)
      out.push_back(Outcome::failure());
    verify(g, "step");
    frontier.push_back({std::move(g), id});
  }
  return out;
}

namespace {

void value_text(const Graph& g, NodeId n, std::string& out) {
  n = g.resolved(n);
  const Symbol& s = g.symbols()[g.label(n)];
  if (s.kind == SymbolKind::Number) {
    out += std::to_string(s.value);
    return;
  }
  if (s.kind != SymbolKind::Constructor)
    throw Error(ErrorKind::NotNormalForm,
                "#" + std::to_string(n) + " is labelled by " + std::string(to_string(s.kind)) +
                    " '" + s.name + "'");
  out += s.name;
  const auto& args = g.args(n);
  if (args.empty())
    return;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i)
      out += ", ";
    value_text(g, args[i], out);
  }
  out += ')';
}

void term_text(const Graph& g, NodeId n, std::string& out) {
  n = g.resolved(n);
  const Symbol& s = g.symbols()[g.label(n)];
  const auto& args = g.args(n);
  if (s.kind == SymbolKind::Number) {
    out += std::to_string(s.value);
    return;
  }
  if (s.builtin != Builtin::None || s.kind == SymbolKind::Choice) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i)
        out += " " + s.name + " ";
      term_text(g, args[i], out);
    }
    out += ')';
    return;
  }
  out += s.name;
  if (args.empty())
    return;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i)
      out += ", ";
    term_text(g, args[i], out);
  }
  out += ')';
}

} // namespace

std::string print_value(const Graph& g, NodeId n) {
  std::string out;
  value_text(g, n, out);
  return out;
}

std::string print_term(const Graph& g, NodeId n) {
  std::string out;
  term_text(g, n, out);
  return out;
}

std::vector<Outcome> enumerate_normal_forms(const Program& program, const DefTreeMap& trees,
                                            const GoalAst& goal, EngineOptions options,
                                            EngineStats* stats) {
  Engine engine(program, trees, std::move(options));
  auto out = engine.enumerate(build_graph(goal, program));
  if (stats)
    *stats = engine.stats();
  return out;
}

} // namespace bfl
