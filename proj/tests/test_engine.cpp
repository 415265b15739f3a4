#include "bubblefl/engine.hpp"
#include "bubblefl/error.hpp"

#include "testing.hpp"

#include <doctest.h>

#include <map>

using namespace bfl;
using bfl::testing::load;
using bfl::testing::run_goal;
using bfl::testing::values;
using Values = std::multiset<std::string>;

TEST_SUITE("engine") {

TEST_CASE("step leaves numbers and failures alone") {
  auto l = load("", true);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "5");
  std::string before = g.dump();
  CHECK(e.step(g, g.root(), Mode::NormalForm).rewrites == 0);
  CHECK(g.dump() == before);
  Graph f = testing::goal_graph(l, "fail");
  CHECK(e.step(f, f.root(), Mode::NormalForm).rewrites == 0);
}

TEST_CASE("normal-form step reaches inside constructors") {
  auto l = load("", true);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "Cons (1 + 1) Nil");
  CHECK(e.step(g, g.root(), Mode::HeadNormalForm).rewrites == 0);
  CHECK(e.step(g, g.root(), Mode::NormalForm).rewrites == 1);
  CHECK(print_value(g, g.root()) == "Cons(2, Nil)");
  CHECK(g.check_invariants().ok());
}

TEST_CASE("one round touches both builtin arguments once") {
  auto l = load("", true);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "Fact 5 + Fact 6");
  NodeId a = g.args(g.root())[0];
  NodeId b = g.args(g.root())[1];
  StepReport r = e.step(g, g.root(), Mode::NormalForm);
  CHECK(r.rewrites == 2);
  CHECK(g.symbols().name(g.label(a)) == "ite");
  CHECK(g.symbols().name(g.label(b)) == "ite");
  CHECK(print_term(g, g.root()) ==
        "(ite((5 <= 1), 1, (5 * Fact((5 - 1)))) + ite((6 <= 1), 1, (6 * Fact((6 - 1)))))");
}

TEST_CASE("a shared redex is stepped once per round") {
  auto l = load("", true);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "X + X where X = 1 + 1");
  CHECK(e.step(g, g.root(), Mode::NormalForm).rewrites == 1);
  CHECK(print_term(g, g.root()) == "(2 + 2)");
}

TEST_CASE("instantiate_rhs") {
  auto l = load("data Nat = Z | S Nat\nleq2 x y = leq x y\ndup x = x + x\nfst x y = x\n"
                "leq Z _ = True\nleq (S x) _ = False\n",
                false);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "leq2 Z (S Z)");
  NodeId n1 = g.args(g.root())[0];
  NodeId n2 = g.args(g.root())[1];
  auto rhs_of = [&](std::string_view op) -> const Term& {
    return l.program.rules[l.program.rules_of.at(*l.program.symbols->lookup(op))[0]].rhs;
  };
  std::vector<NodeId> both{n1, n2};
  NodeId leq = e.instantiate_rhs(g, rhs_of("leq2"), both);
  CHECK(g.args(leq) == both);
  CHECK(g.symbols().name(g.label(leq)) == "leq");

  CHECK(e.instantiate_rhs(g, rhs_of("fst"), both) == n1);

  std::vector<NodeId> one{n2};
  NodeId plus = e.instantiate_rhs(g, rhs_of("dup"), one);
  CHECK(g.args(plus)[0] == g.args(plus)[1]);
  // The goal, leq and both slots of +.
  CHECK(g.backpointers(n2).size() == 4);
}

TEST_CASE("deterministic goals") {
  auto l = load("", true);
  CHECK(values(run_goal(l, "(3 + 4) - 5")) == Values{"2"});
  CHECK(values(run_goal(l, "0 - 3")) == Values{"-3"});
  CHECK(values(run_goal(l, "Fact 5")) == Values{"120"});
  CHECK(values(run_goal(l, "Fibo 10")) == Values{"55"});
  CHECK(values(run_goal(l, "leq Z (S Z)")) == Values{"True"});
  CHECK(values(run_goal(l, "leq (S Z) Z")) == Values{"False"});
  CHECK(values(run_goal(l, "append (Cons 1 Nil) (Cons (1+1) Nil)")) == Values{"Cons(1, Cons(2, Nil))"});
  CHECK(run_goal(l, "1 / 0") == std::vector<Outcome>{Outcome::failure()});
}

TEST_CASE("values are emitted in discovery order with failures") {
  auto l = load("", true);
  auto out = run_goal(l, "loop ? 1+2", {.budget = 100});
  CHECK(values(out) == Values{"3"});
  CHECK(testing::count(out, Outcome::Kind::BudgetExhausted) == 1);
  CHECK(out.front() == Outcome::value("3"));
}

TEST_CASE("call-time choice") {
  auto l = load("double x = x + x\n", true);
  CHECK(values(run_goal(l, "(1+X)+(X+2) where X = 0 ? 1")) == Values{"3", "5"});
  CHECK(values(run_goal(l, "coin + coin")) == Values{"0", "1", "1", "2"});
  CHECK(values(run_goal(l, "X + X where X = coin")) == Values{"0", "2"});
  CHECK(values(run_goal(l, "double coin")) == Values{"0", "2"});
  CHECK(values(run_goal(l, "double coin", {.strategy = Strategy::Copying})) == Values{"0", "2"});
}

TEST_CASE("failure inside a constructor fails the whole term first") {
  auto l = load("", true);
  Engine e(l.program, l.trees);
  Graph g = testing::goal_graph(l, "Cons fail loop");
  e.step(g, g.root(), Mode::NormalForm);
  CHECK(g.kind(g.root()) == SymbolKind::Fail);
  CHECK(run_goal(l, "Cons (1/0) loop", {.budget = 50}) ==
        std::vector<Outcome>{Outcome::failure()});
}

TEST_CASE("head normal form mode stops at the constructor") {
  auto l = load("", true);
  auto out = run_goal(l, "Cons (1+1) loop", {.mode = Mode::HeadNormalForm});
  CHECK(out == std::vector<Outcome>{Outcome::value("Cons((1 + 1), loop)")});
}

TEST_CASE("round-robin fairness") {
  auto l = load("", true);
  std::map<std::size_t, std::size_t> rounds;
  EngineOptions eo;
  eo.budget = 301;
  eo.on_round = [&](std::size_t id) { ++rounds[id]; };
  auto out = enumerate_normal_forms(l.program, l.trees, parse_goal("loop ? (loop ? loop)"), eo);
  CHECK(testing::count(out, Outcome::Kind::BudgetExhausted) == 3);
  std::size_t lo = SIZE_MAX, hi = 0;
  for (auto& [id, n] : rounds)
    if (id != 0) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
  CHECK(rounds.size() == 3);
  CHECK(hi - lo <= 1);
}

TEST_CASE("first k values") {
  auto l = load("", true);
  EngineOptions eo;
  eo.first = 1;
  auto out = enumerate_normal_forms(l.program, l.trees, parse_goal("1 ? 2 ? 3"), eo);
  CHECK(out == std::vector<Outcome>{Outcome::value("1")});
}

TEST_CASE("print_value") {
  auto l = load("", true);
  Graph g = testing::goal_graph(l, "Cons 2 Nil");
  CHECK(print_value(g, g.root()) == "Cons(2, Nil)");
  Graph s = testing::goal_graph(l, "S (S Z)");
  CHECK(print_value(s, s.root()) == "S(S(Z))");
  Graph two = testing::goal_graph(l, "2");
  CHECK(print_value(two, two.root()) == "2");
  Graph shared = testing::goal_graph(l, "Cons X X where X = S Z");
  CHECK(print_value(shared, shared.root()) == "Cons(S(Z), S(Z))");
  Graph open = testing::goal_graph(l, "Cons (1+1) Nil");
  try {
    (void)print_value(open, open.root());
    FAIL("expected NotNormalForm");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNormalForm);
  }
}

TEST_CASE("arithmetic overflow is an error") {
  auto l = load("", true);
  CHECK_THROWS_AS(run_goal(l, "9223372036854775807 * 2"), Error);
}

TEST_CASE("stats") {
  auto l = load("", true);
  EngineStats s;
  run_goal(l, "(3 + 4) - 5", {}, &s);
  CHECK(s.rounds == 2);
  CHECK(s.rewrites == 2);
  CHECK(s.bubbling_copied == 0);
  CHECK(s.fork_copied == 0);
  CHECK(s.peak_nodes == 5);
}

}
