#include "bubblefl/graph.hpp"

#include "bubblefl/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace bfl {

std::string InvariantReport::str() const {
  std::string out;
  for (const auto& v : violations) {
    out += v;
    out += '\n';
  }
  return out;
}

Graph::Graph(std::shared_ptr<SymbolTable> symbols) : symbols_(std::move(symbols)) {}

void Graph::check_arity(SymbolId label, std::size_t count) const {
  const Symbol& s = (*symbols_)[label];
  if (s.kind == SymbolKind::Choice)
    return;
  if (count != s.arity)
    throw Error(ErrorKind::ArityMismatch, "'" + s.name + "' expects " + std::to_string(s.arity) +
                                              " argument(s), got " + std::to_string(count));
}

bool Graph::compute_nf(SymbolId label, std::span<const NodeId> args) const {
  if (!symbols_->is_constructor_like(label))
    return false;
  return std::all_of(args.begin(), args.end(), [&](NodeId a) { return nodes_[a].nf; });
}

NodeId Graph::add_node(SymbolId label, std::span<const NodeId> args) {
  check_arity(label, args.size());
  auto id = static_cast<NodeId>(nodes_.size());
  NodeEntry entry;
  entry.label = label;
  entry.args.reserve(args.size());
  for (NodeId a : args) {
    NodeId r = resolve(a);
    if (!is_live(r))
      throw Error(ErrorKind::CorruptStore, "argument #" + std::to_string(r) + " is not live");
    entry.args.push_back(r);
  }
  entry.nf = compute_nf(label, entry.args);
  nodes_.push_back(std::move(entry));
  for (std::uint32_t i = 0; i < nodes_[id].args.size(); ++i)
    add_backpointer(nodes_[id].args[i], id, i);
  return id;
}

NodeId Graph::resolve(NodeId n) {
  NodeId target = resolved(n);
  while (nodes_.at(n).forward && *nodes_[n].forward != target) {
    NodeId next = *nodes_[n].forward;
    nodes_[n].forward = target;
    n = next;
  }
  return target;
}

NodeId Graph::resolved(NodeId n) const {
  std::size_t hops = 0;
  while (nodes_.at(n).forward) {
    n = *nodes_[n].forward;
    if (++hops > nodes_.size())
      throw Error(ErrorKind::CorruptStore, "forwarding cycle through #" + std::to_string(n));
  }
  return n;
}

void Graph::add_backpointer(NodeId child, NodeId parent, std::uint32_t position) {
  nodes_[child].backpointers.push_back({parent, position});
  update_depths(child, nodes_[parent].min_depth, nodes_[parent].max_depth);
}

void Graph::remove_backpointer(NodeId child, NodeId parent, std::uint32_t position) {
  auto& bps = nodes_[child].backpointers;
  auto it = std::find(bps.begin(), bps.end(), BackPointer{parent, position});
  if (it == bps.end())
    throw Error(ErrorKind::CorruptStore, "missing backpointer (" + std::to_string(parent) + "," +
                                             std::to_string(position) + ") on #" +
                                             std::to_string(child));
  bps.erase(it);
  if (bps.empty() && child != root_ && !nodes_[child].dead)
    kill(child);
}

void Graph::kill(NodeId n) {
  std::vector<NodeId> work{n};
  nodes_[n].dead = true;
  while (!work.empty()) {
    NodeId cur = work.back();
    work.pop_back();
    const auto args = nodes_[cur].args;
    for (std::uint32_t i = 0; i < args.size(); ++i) {
      NodeId c = args[i];
      auto& bps = nodes_[c].backpointers;
      auto it = std::find(bps.begin(), bps.end(), BackPointer{cur, i});
      if (it == bps.end())
        throw Error(ErrorKind::CorruptStore, "missing backpointer while unlinking #" +
                                                 std::to_string(cur));
      bps.erase(it);
      if (bps.empty() && c != root_ && !nodes_[c].dead) {
        nodes_[c].dead = true;
        work.push_back(c);
      }
    }
  }
}

void Graph::discard(NodeId n) {
  if (n == root_ || !nodes_.at(n).backpointers.empty())
    throw Error(ErrorKind::CorruptStore, "discard of attached node #" + std::to_string(n));
  if (!nodes_[n].dead)
    kill(n);
}

void Graph::overwrite(NodeId redex, SymbolId label, std::span<const NodeId> args) {
  if (!is_live(redex))
    throw Error(ErrorKind::CorruptStore, "overwrite of dead node #" + std::to_string(redex));
  check_arity(label, args.size());
  std::vector<NodeId> fresh;
  fresh.reserve(args.size());
  for (NodeId a : args) {
    NodeId r = resolve(a);
    if (!is_live(r))
      throw Error(ErrorKind::CorruptStore, "argument #" + std::to_string(r) + " is not live");
    if (r == redex || reaches(r, redex))
      throw Error(ErrorKind::CycleCreated,
                  "#" + std::to_string(r) + " reaches #" + std::to_string(redex));
    fresh.push_back(r);
  }
  const auto old = nodes_[redex].args;
  for (std::uint32_t i = 0; i < fresh.size(); ++i)
    add_backpointer(fresh[i], redex, i);
  nodes_[redex].label = label;
  nodes_[redex].args = fresh;
  nodes_[redex].nf = compute_nf(label, fresh);
  for (std::uint32_t i = 0; i < old.size(); ++i)
    remove_backpointer(old[i], redex, i);
}

void Graph::redirect(NodeId redex, NodeId target) {
  if (!is_live(redex))
    throw Error(ErrorKind::CorruptStore, "redirect of dead node #" + std::to_string(redex));
  target = resolve(target);
  if (target == redex || reaches(target, redex))
    throw Error(ErrorKind::CycleCreated,
                "redirect #" + std::to_string(redex) + " -> #" + std::to_string(target));
  if (!is_live(target))
    throw Error(ErrorKind::CorruptStore, "redirect target #" + std::to_string(target) + " is dead");

  auto moved = std::move(nodes_[redex].backpointers);
  nodes_[redex].backpointers.clear();
  for (const BackPointer& bp : moved) {
    nodes_[bp.parent].args[bp.position] = target;
    add_backpointer(target, bp.parent, bp.position);
  }
  // A parent whose nf tag was blocked by the redex may now qualify; the tag
  // stays conservative and is recomputed lazily by the engine.
  if (root_ == redex)
    set_root(target);
  nodes_[redex].forward = target;
  kill(redex);
}

void Graph::update_depths(NodeId n, int parent_min, int parent_max) {
  struct Item {
    NodeId node;
    int pmin;
    int pmax;
  };
  std::vector<Item> work{{n, parent_min, parent_max}};
  while (!work.empty()) {
    auto [cur, pmin, pmax] = work.back();
    work.pop_back();
    auto& e = nodes_[cur];
    int new_min = pmin >= kUnsetDepth ? e.min_depth : std::min(e.min_depth, pmin + 1);
    int new_max = std::max(e.max_depth, pmax + 1);
    if (new_min == e.min_depth && new_max == e.max_depth)
      continue;
    e.min_depth = new_min;
    e.max_depth = new_max;
    for (NodeId c : e.args)
      work.push_back({c, new_min, new_max});
  }
}

bool Graph::normal_form(NodeId n) {
  n = resolve(n);
  if (nodes_[n].nf)
    return true;
  if (!symbols_->is_constructor_like(nodes_[n].label))
    return false;
  for (NodeId c : nodes_[n].args)
    if (!normal_form(c))
      return false;
  nodes_[n].nf = true;
  return true;
}

void Graph::set_root(NodeId n) {
  n = resolve(n);
  root_ = n;
  auto& e = nodes_.at(n);
  if (e.min_depth != 0) {
    e.min_depth = 0;
    for (NodeId c : e.args)
      update_depths(c, 0, e.max_depth);
  }
}

std::vector<NodeId> Graph::parents(NodeId n) const {
  std::vector<NodeId> out;
  for (const auto& bp : nodes_.at(n).backpointers)
    if (std::find(out.begin(), out.end(), bp.parent) == out.end())
      out.push_back(bp.parent);
  return out;
}

std::vector<NodeId> Graph::reachable() const {
  std::vector<NodeId> out;
  if (root_ == kNoNode)
    return out;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> work{root_};
  seen[root_] = 1;
  while (!work.empty()) {
    NodeId cur = work.back();
    work.pop_back();
    out.push_back(cur);
    for (NodeId c : nodes_[cur].args)
      if (c < nodes_.size() && !seen[c]) {
        seen[c] = 1;
        work.push_back(c);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::reaches(NodeId from, NodeId to) const {
  if (from == to)
    return true;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> work{from};
  seen[from] = 1;
  while (!work.empty()) {
    NodeId cur = work.back();
    work.pop_back();
    for (NodeId c : nodes_[cur].args) {
      if (c == to)
        return true;
      if (!seen[c]) {
        seen[c] = 1;
        work.push_back(c);
      }
    }
  }
  return false;
}

Graph Graph::extract(NodeId from, std::size_t* copied) const {
  from = resolved(from);
  Graph out(symbols_);
  std::unordered_map<NodeId, NodeId> map;
  // Post-order so children exist before their parents.
  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<Frame> stack{{from, 0}};
  while (!stack.empty()) {
    auto& top = stack.back();
    const auto& args = nodes_[top.node].args;
    if (top.next < args.size()) {
      NodeId c = resolved(args[top.next++]);
      if (!map.contains(c))
        stack.push_back({c, 0});
      continue;
    }
    if (!map.contains(top.node)) {
      std::vector<NodeId> mapped;
      for (NodeId c : args)
        mapped.push_back(map.at(resolved(c)));
      map.emplace(top.node, out.add_node(nodes_[top.node].label, mapped));
    }
    stack.pop_back();
  }
  out.set_root(map.at(from));
  if (copied)
    *copied = map.size();
  return out;
}

InvariantReport Graph::check_invariants() const {
  InvariantReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  if (root_ == kNoNode) {
    fail("graph has no root");
    return report;
  }
  auto nodes = reachable();
  std::vector<char> is_reachable(nodes_.size(), 0);
  for (NodeId n : nodes)
    is_reachable[n] = 1;

  // Acyclicity via iterative three-colour DFS.
  std::vector<char> colour(nodes_.size(), 0);
  std::vector<NodeId> topo; // reverse post-order
  bool cyclic = false;
  {
    struct Frame {
      NodeId node;
      std::size_t next;
    };
    std::vector<Frame> stack{{root_, 0}};
    colour[root_] = 1;
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& args = nodes_[top.node].args;
      if (top.next < args.size()) {
        NodeId c = args[top.next++];
        if (colour[c] == 1) {
          if (!cyclic)
            fail("cycle: #" + std::to_string(top.node) + " -> #" + std::to_string(c));
          cyclic = true;
        } else if (colour[c] == 0) {
          colour[c] = 1;
          stack.push_back({c, 0});
        }
        continue;
      }
      colour[top.node] = 2;
      topo.push_back(top.node);
      stack.pop_back();
    }
    std::reverse(topo.begin(), topo.end());
  }

  std::map<SymbolId, NodeId> variable_owner;
  for (NodeId n : nodes) {
    const auto& e = nodes_[n];
    const Symbol& s = (*symbols_)[e.label];
    if (e.dead || e.forward)
      fail("#" + std::to_string(n) + " is reachable but dead or forwarded");
    if (s.kind == SymbolKind::Choice) {
      if (e.args.empty())
        fail("#" + std::to_string(n) + " choice without alternatives");
    } else if (e.args.size() != s.arity) {
      fail("#" + std::to_string(n) + " arity " + std::to_string(e.args.size()) + " for '" +
           s.name + "'/" + std::to_string(s.arity));
    }
    if (s.kind == SymbolKind::Variable) {
      auto [it, inserted] = variable_owner.emplace(e.label, n);
      if (!inserted)
        fail("variable '" + s.name + "' labels #" + std::to_string(it->second) + " and #" +
             std::to_string(n));
    }
    for (std::uint32_t i = 0; i < e.args.size(); ++i) {
      NodeId c = e.args[i];
      auto count = std::count(nodes_[c].backpointers.begin(), nodes_[c].backpointers.end(),
                              BackPointer{n, i});
      if (count != 1)
        fail("edge #" + std::to_string(n) + "[" + std::to_string(i) + "] -> #" +
             std::to_string(c) + " has " + std::to_string(count) + " backpointer(s)");
    }
    for (const auto& bp : e.backpointers) {
      if (bp.parent >= nodes_.size() || !is_reachable[bp.parent]) {
        fail("#" + std::to_string(n) + " backpointer from unreachable #" +
             std::to_string(bp.parent));
        continue;
      }
      const auto& pargs = nodes_[bp.parent].args;
      if (bp.position >= pargs.size() || pargs[bp.position] != n)
        fail("#" + std::to_string(n) + " backpointer (" + std::to_string(bp.parent) + "," +
             std::to_string(bp.position) + ") has no matching edge");
    }
    if (n != root_ && e.backpointers.empty())
      fail("#" + std::to_string(n) + " is reachable but has no backpointers");
    if (e.nf) {
      bool sound = symbols_->is_constructor_like(e.label) &&
                   std::all_of(e.args.begin(), e.args.end(),
                               [&](NodeId c) { return nodes_[c].nf; });
      if (!sound)
        fail("#" + std::to_string(n) + " nf tag set on a non-normal form");
    }
  }

  if (!cyclic) {
    std::vector<int> shortest(nodes_.size(), kUnsetDepth);
    std::vector<int> longest(nodes_.size(), -1);
    shortest[root_] = 0;
    longest[root_] = 0;
    for (NodeId n : topo)
      for (NodeId c : nodes_[n].args) {
        shortest[c] = std::min(shortest[c], shortest[n] + 1);
        longest[c] = std::max(longest[c], longest[n] + 1);
      }
    for (NodeId n : nodes) {
      const auto& e = nodes_[n];
      if (e.min_depth > shortest[n] || e.max_depth < longest[n])
        fail("#" + std::to_string(n) + " depth=[" + std::to_string(e.min_depth) + "," +
             std::to_string(e.max_depth) + "] does not bound true [" +
             std::to_string(shortest[n]) + "," + std::to_string(longest[n]) + "]");
    }
  }
  return report;
}

std::string Graph::dump() const {
  std::ostringstream os;
  for (NodeId n : reachable()) {
    const auto& e = nodes_[n];
    os << '#' << n << ' ' << (*symbols_)[e.label].name << '(';
    for (std::size_t i = 0; i < e.args.size(); ++i)
      os << (i ? "," : "") << e.args[i];
    os << ") bp=[";
    auto bps = e.backpointers;
    std::sort(bps.begin(), bps.end());
    for (std::size_t i = 0; i < bps.size(); ++i)
      os << (i ? "," : "") << '(' << bps[i].parent << ',' << bps[i].position << ')';
    os << "] depth=[" << e.min_depth << ',' << e.max_depth << "] nf=" << (e.nf ? "true" : "false")
       << '\n';
  }
  return os.str();
}

} // namespace bfl
