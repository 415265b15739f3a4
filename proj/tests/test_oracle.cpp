#include "bubblefl/error.hpp"
#include "bubblefl/oracle.hpp"

#include "testing.hpp"

#include <doctest.h>

using namespace bfl;
using bfl::testing::find_node;
using bfl::testing::load;
using bfl::testing::values;
using Values = std::multiset<std::string>;

namespace {

std::vector<Outcome> substitute(const testing::Loaded& l, std::string_view goal,
                                SubstitutionOptions o = {}) {
  return enumerate_by_substitution(l.program, l.trees, parse_goal(goal), o);
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("brute-force dominators") {
  auto l = load("", true);
  Graph g = testing::goal_graph(l, "(((3/X)+(X*2))-4) where X = 0 ? 1");
  NodeId x = find_node(g, "?");
  DominatorResult d = brute_dominator(g, x);
  CHECK(d.dominator == find_node(g, "+"));
  CHECK(d.ancestral_path.size() == 3);

  Graph chain = testing::goal_graph(l, "S (S (S Z))");
  NodeId z = find_node(chain, "Z");
  CHECK(brute_dominator(chain, z).dominator == chain.parents(z)[0]);

  try {
    (void)brute_dominator(g, g.root());
    FAIL("expected IsRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IsRoot);
  }

  std::string big = "Z";
  for (int i = 0; i < 25; ++i)
    big = "S (" + big + ")";
  Graph deep = testing::goal_graph(l, big);
  try {
    (void)brute_dominator(deep, find_node(deep, "Z"));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("substitution respects call-time choice") {
  auto l = load("", true);
  const char* goal = "(1+X)+(X+2) where X = 0 ? 1";
  CHECK(values(substitute(l, goal)) == Values{"3", "5"});
  CHECK(values(substitute(l, goal, {.duplicate = true})) == Values{"3", "4", "4", "5"});
}

TEST_CASE("substitution expands nested and unshared choices") {
  auto l = load("", true);
  CHECK(values(substitute(l, "(0 ? 1) + (10 ? 20)")) == Values{"10", "20", "11", "21"});
  CHECK(values(substitute(l, "X * Y where X = 1 ? 2, Y = X + (0 ? 1)")) ==
        Values{"1", "2", "4", "6"});
  CHECK(substitute(l, "(1/0) ? 3") ==
        std::vector<Outcome>{Outcome::failure(), Outcome::value("3")});
}

TEST_CASE("deterministic goals agree with the engine") {
  auto l = load("", true);
  for (const char* goal : {"(3 + 4) - 5", "Fact 5", "Fibo 10", "leq (S Z) (S (S Z))",
                           "append (Cons 1 Nil) (Cons 2 Nil)", "1 / 0"}) {
    CHECK_MESSAGE(substitute(l, goal) == testing::run_goal(l, goal), goal);
  }
}

TEST_CASE("programs with choices in rules are not statically enumerable") {
  auto l = load("pick x y = x\npick x y = y\n", true);
  for (const char* goal : {"coin + 1", "pick 1 2"}) {
    try {
      (void)substitute(l, goal);
      FAIL("expected NotStaticallyEnumerable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotStaticallyEnumerable);
    }
  }
  // Unreachable rules do not matter.
  CHECK(values(substitute(l, "1 ? 2")) == Values{"1", "2"});
}

TEST_CASE("substitution budget") {
  auto l = load("", true);
  auto out = substitute(l, "loop ? 1+2", {.budget = 50});
  CHECK(values(out) == Values{"3"});
  CHECK(testing::count(out, Outcome::Kind::BudgetExhausted) == 1);
}

}
