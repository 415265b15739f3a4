#include "bubblefl/bubbling.hpp"

#include "bubblefl/error.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace bfl {

PathsToRoot::PathsToRoot(const Graph& g, NodeId x) : g_(g) {
  x = g.resolved(x);
  if (x == g.root())
    throw Error(ErrorKind::IsRoot, "#" + std::to_string(x) + " is the root");
  stack_.push_back({x, g.parents(x)});
}

std::optional<std::vector<NodeId>> PathsToRoot::next() {
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    if (stack_.size() > 1 && top.node == g_.root()) {
      std::vector<NodeId> path;
      for (std::size_t i = 1; i < stack_.size(); ++i)
        path.push_back(stack_[i].node);
      stack_.pop_back();
      return path;
    }
    if (top.next < top.parents.size()) {
      NodeId p = top.parents[top.next++];
      stack_.push_back({p, g_.parents(p)});
      continue;
    }
    stack_.pop_back();
  }
  return std::nullopt;
}

std::vector<NodeId> ancestors(const Graph& g, NodeId x) {
  x = g.resolved(x);
  std::unordered_set<NodeId> seen{x};
  std::vector<NodeId> work{x};
  std::vector<NodeId> out;
  while (!work.empty()) {
    NodeId n = work.back();
    work.pop_back();
    for (const auto& bp : g.backpointers(n))
      if (seen.insert(bp.parent).second) {
        out.push_back(bp.parent);
        work.push_back(bp.parent);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Ancestors of x in topological order, root first.
std::vector<NodeId> ancestors_root_first(const Graph& g, NodeId x) {
  struct Frame {
    NodeId node;
    std::vector<NodeId> parents;
    std::size_t next = 0;
  };
  std::unordered_set<NodeId> seen{x};
  std::vector<NodeId> order;
  std::vector<Frame> stack{{x, g.parents(x)}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next < top.parents.size()) {
      NodeId p = top.parents[top.next++];
      if (seen.insert(p).second)
        stack.push_back({p, g.parents(p)});
      continue;
    }
    if (top.node != x)
      order.push_back(top.node);
    stack.pop_back();
  }
  return order;
}

std::vector<NodeId> intersect(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Nodes of `within` reachable from `a`, plus a.
std::vector<NodeId> descendants_within(const Graph& g, NodeId a,
                                       const std::unordered_set<NodeId>& within) {
  std::unordered_set<NodeId> seen{a};
  std::vector<NodeId> work{a};
  while (!work.empty()) {
    NodeId n = work.back();
    work.pop_back();
    for (NodeId c : g.args(n))
      if (within.contains(c) && seen.insert(c).second)
        work.push_back(c);
  }
  std::vector<NodeId> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

DominatorResult least_dominator(const Graph& g, NodeId x) {
  x = g.resolved(x);
  if (x == g.root())
    throw Error(ErrorKind::IsRoot, "#" + std::to_string(x) + " is the root");
  auto order = ancestors_root_first(g, x);
  const int x_max = g.entry(x).max_depth;

  // A dominator of x lies on its longest path, so its recorded minimum
  // depth is below x's recorded maximum. Nodes failing that are never
  // tracked as candidates.
  auto candidate = [&](NodeId n) { return g.entry(n).min_depth < x_max; };

  std::unordered_map<NodeId, std::vector<NodeId>> dom;
  auto dominators_of = [&](NodeId n) {
    std::vector<NodeId> acc;
    bool first = true;
    for (NodeId p : g.parents(n)) {
      const auto& d = dom.at(p);
      acc = first ? d : intersect(acc, d);
      first = false;
    }
    return acc;
  };
  for (NodeId n : order) {
    std::vector<NodeId> d = n == g.root() ? std::vector<NodeId>{} : dominators_of(n);
    if (candidate(n))
      d.insert(std::upper_bound(d.begin(), d.end(), n), n);
    dom.emplace(n, std::move(d));
  }
  auto dx = dominators_of(x);
  if (dx.empty())
    throw Error(ErrorKind::BadDominator, "no dominator found for #" + std::to_string(x));
  NodeId a = *std::max_element(dx.begin(), dx.end(), [&](NodeId l, NodeId r) {
    return dom.at(l).size() < dom.at(r).size();
  });
  std::unordered_set<NodeId> within(order.begin(), order.end());
  return {a, descendants_within(g, a, within)};
}

DominatorResult root_dominator(const Graph& g, NodeId x) {
  x = g.resolved(x);
  if (x == g.root())
    throw Error(ErrorKind::IsRoot, "#" + std::to_string(x) + " is the root");
  return {g.root(), ancestors(g, x)};
}

BubbleReport bubble(Graph& g, NodeId x, NodeId a, const std::vector<NodeId>& ap) {
  x = g.resolve(x);
  if (g.kind(x) != SymbolKind::Choice || g.args(x).size() < 2)
    throw Error(ErrorKind::NotAChoice, "#" + std::to_string(x) + " is not a choice of arity >= 2");
  std::unordered_set<NodeId> in_ap(ap.begin(), ap.end());
  auto bad = [&](const std::string& why) {
    throw Error(ErrorKind::BadDominator, "dominator #" + std::to_string(a) + " of #" +
                                             std::to_string(x) + ": " + why);
  };
  if (!in_ap.contains(a))
    bad("dominator is not on the ancestral path");
  if (in_ap.contains(x))
    bad("ancestral path contains the choice");
  for (NodeId p : g.parents(x))
    if (!in_ap.contains(p))
      bad("parent #" + std::to_string(p) + " of the choice is outside the ancestral path");
  for (NodeId n : ap)
    if (n != a)
      for (NodeId p : g.parents(n))
        if (!in_ap.contains(p))
          bad("parent #" + std::to_string(p) + " of #" + std::to_string(n) +
              " is outside the ancestral path");

  // Children before parents.
  std::vector<NodeId> post;
  {
    std::unordered_set<NodeId> seen{a};
    std::vector<std::pair<NodeId, std::size_t>> stack{{a, 0}};
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      const auto& args = g.args(n);
      if (i < args.size()) {
        NodeId c = args[i++];
        if (in_ap.contains(c) && seen.insert(c).second)
          stack.push_back({c, 0});
        continue;
      }
      post.push_back(n);
      stack.pop_back();
    }
    if (post.size() != ap.size())
      bad("ancestral path is not below the dominator");
  }

  const std::vector<NodeId> alternatives = g.args(x);
  std::vector<NodeId> tops;
  for (NodeId alt : alternatives) {
    std::unordered_map<NodeId, NodeId> copy;
    for (NodeId n : post) {
      std::vector<NodeId> args;
      for (NodeId c : g.args(n)) {
        if (c == x)
          args.push_back(alt);
        else if (auto it = copy.find(c); it != copy.end())
          args.push_back(it->second);
        else
          args.push_back(c);
      }
      copy.emplace(n, g.add_node(g.label(n), args));
    }
    tops.push_back(copy.at(a));
  }
  g.overwrite(x, g.symbols().choice(), tops);
  g.redirect(a, x);
  return {ap.size(), alternatives.size(), ap.size() * alternatives.size()};
}

StepReport code_choice(Graph& g, NodeId t, Strategy strategy, const ArgStepper& step_arg,
                       const BubbleObserver& observer) {
  t = g.resolve(t);
  if (g.kind(t) != SymbolKind::Choice)
    throw Error(ErrorKind::NotAChoice, "#" + std::to_string(t) + " is not a choice");
  StepReport report;

  // Unshared nested choices are the same decision; splice them in.
  std::vector<NodeId> flat;
  std::vector<NodeId> work(g.args(t).rbegin(), g.args(t).rend());
  while (!work.empty()) {
    NodeId c = work.back();
    work.pop_back();
    if (g.kind(c) == SymbolKind::Choice && g.backpointers(c).size() == 1 && c != t) {
      for (auto it = g.args(c).rbegin(); it != g.args(c).rend(); ++it)
        work.push_back(*it);
      continue;
    }
    flat.push_back(c);
  }
  std::vector<NodeId> kept;
  for (NodeId c : flat)
    if (g.kind(c) != SymbolKind::Fail)
      kept.push_back(c);
  const std::size_t dropped = flat.size() - kept.size();

  if (kept.empty()) {
    report.failures += dropped - 1;
    g.overwrite(t, g.symbols().fail(), {});
    ++report.rewrites;
    return report;
  }
  report.failures += dropped;
  if (kept.size() == 1) {
    g.redirect(t, kept.front());
    ++report.rewrites;
    return report;
  }
  if (kept != g.args(t)) {
    g.overwrite(t, g.symbols().choice(), kept);
    if (dropped)
      ++report.rewrites;
  }

  bool all_pending = std::all_of(kept.begin(), kept.end(), [&](NodeId c) {
    auto k = g.kind(c);
    return k == SymbolKind::Operation || k == SymbolKind::Choice;
  });
  if (all_pending) {
    for (NodeId c : kept)
      step_arg(c);
    return report;
  }
  if (t == g.root()) {
    report.fork_requested = true;
    return report;
  }
  DominatorResult d = strategy == Strategy::Bubbling ? least_dominator(g, t) : root_dominator(g, t);
  BubbleReport b = bubble(g, t, d.dominator, d.ancestral_path);
  ++report.bubblings;
  report.bubble_copies += b.copies;
  if (observer)
    observer({t, d.dominator, b});
  return report;
}

} // namespace bfl
