#include "bubblefl/error.hpp"
#include "bubblefl/parser.hpp"

#include "testing.hpp"

#include <doctest.h>

using namespace bfl;
using bfl::testing::load;

namespace {

const char* kLeq = R"(
data Nat = Z | S Nat
leq Z _ = True
leq (S _) Z = False
leq (S x) (S y) = leq x y
)";

ErrorKind parse_error(std::string_view text) {
  try {
    load(text, false);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised for: " << text);
  return ErrorKind::InvariantViolation;
}

std::string goal_text(const Program& p, std::string_view goal) {
  return format_term(resolve_goal(parse_goal(goal), p).body, *p.symbols, {});
}

} // namespace

TEST_SUITE("parser") {

TEST_CASE("leq rules define one operation") {
  auto l = load(kLeq, false);
  REQUIRE(l.program.operations.size() == 1);
  SymbolId leq = l.program.operations[0];
  CHECK(l.program.symbols->name(leq) == "leq");
  CHECK(l.program.rules_of.at(leq).size() == 3);
  CHECK(format_rule(l.program.rules[2], *l.program.symbols) == "leq(S(x), S(y)) = leq(x, y)");
  CHECK(format_rule(l.program.rules[0], *l.program.symbols) == "leq(Z, _) = True");
}

TEST_CASE("0-ary and self-referential rules") {
  auto l = load("loop = loop\n", false);
  SymbolId loop = *l.program.symbols->lookup("loop");
  CHECK(l.program.symbols->kind(loop) == SymbolKind::Operation);
  CHECK(l.program.symbols->name(l.program.rules[0].rhs.symbol) == "loop");
}

TEST_CASE("static errors") {
  CHECK(parse_error("data Nat = Z | S Nat\nf (S X) X = X\n") == ErrorKind::NonLinearLhs);
  CHECK(parse_error("f x = g x\n") == ErrorKind::UnknownIdentifier);
  CHECK(parse_error("f x = x\nf x y = x\n") == ErrorKind::ArityMismatch);
  CHECK(parse_error("data T = A | B T\nf x = B\n") == ErrorKind::ArityMismatch);
  CHECK(parse_error("data T = A\nA = A\n") == ErrorKind::DuplicateSymbol);
  CHECK(parse_error("f x = x where y = 1\n") == ErrorKind::SyntaxError);
  CHECK(parse_error("f x = (x\n") == ErrorKind::SyntaxError);
  CHECK(parse_error("f x = x $\n") == ErrorKind::SyntaxError);
  CHECK(parse_error("f x x\n") == ErrorKind::SyntaxError);
  CHECK(parse_error("f (g x) = x\ng x = x\n") == ErrorKind::UnknownIdentifier);
  CHECK(parse_error("f x = x 1\n") == ErrorKind::ArityMismatch);
}

TEST_CASE("diagnostics carry line and column") {
  try {
    load("f x = x\n\ng y = h y\n", false);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("<test>:3:7") != std::string::npos);
  }
}

TEST_CASE("continuation lines and comments") {
  auto l = load("-- comment\nf x =\n  Cons x   -- trailing\n    Nil\n", true);
  SymbolId f = *l.program.symbols->lookup("f");
  const Rule& r = l.program.rules[l.program.rules_of.at(f)[0]];
  CHECK(format_rule(r, *l.program.symbols) == "f(x) = Cons(x, Nil)");
}

TEST_CASE("goal precedence and associativity") {
  auto l = load("loop = loop\n", false);
  const auto& p = l.program;
  CHECK(goal_text(p, "(3 + 4) - 5") == "((3 + 4) - 5)");
  CHECK(goal_text(p, "loop ? 1+2") == "(loop ? (1 + 2))");
  CHECK(goal_text(p, "1 - 2 - 3") == "((1 - 2) - 3)");
  CHECK(goal_text(p, "1 ? 2 ? 3") == "(1 ? (2 ? 3))");
  CHECK(goal_text(p, "1 + 2 * 3 == 7") == "((1 + (2 * 3)) == 7)");
  CHECK(goal_text(p, "1 <= 2 ? 3") == "((1 <= 2) ? 3)");
  CHECK(goal_text(p, "0 - -3") == "(0 - (-3))");
  CHECK(goal_text(p, "fail ? 1") == "(fail ? 1)");
}

TEST_CASE("call syntax splices argument lists") {
  auto l = load(kLeq, false);
  CHECK(goal_text(l.program, "leq(Z, S(Z))") == goal_text(l.program, "leq Z (S Z)"));
}

TEST_CASE("goal errors") {
  auto l = load("loop = loop\n", false);
  CHECK_THROWS_AS(parse_goal("X where"), Error);
  try {
    (void)parse_goal("X where");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
  }
  try {
    (void)parse_goal("X where X = Y, Y = X + 1");
    FAIL("expected UnboundWhereName");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundWhereName);
  }
  try {
    (void)parse_goal("X where X = 1, X = 2");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
  }
  try {
    (void)build_graph(parse_goal("Q + 1"), l.program);
    FAIL("expected UnknownIdentifier");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
  }
}

TEST_CASE("where-bound names are shared nodes") {
  auto l = load("", true);
  Graph shared = testing::goal_graph(l, "(1+X)+(X+2) where X = (0 ? 1)");
  NodeId x = testing::find_node(shared, "?");
  REQUIRE(x != kNoNode);
  CHECK(shared.parents(x).size() == 2);
  CHECK(shared.check_invariants().ok());

  Graph arith = testing::goal_graph(l, "(3 + 4) - 5");
  CHECK(arith.reachable().size() == 5);

  Graph fact_fibo = testing::goal_graph(l, "(Fact X + Fibo X) where X = 2 ? 3");
  NodeId c = testing::find_node(fact_fibo, "?");
  CHECK(fact_fibo.parents(c).size() == 2);
  CHECK(fact_fibo.check_invariants().ok());
}

TEST_CASE("print_with_sharing round trips") {
  auto l = load("", true);
  for (const char* goal : {"(1+X)+(X+2) where X = (0 ? 1)", "(3 + 4) - 5",
                           "Cons X (Cons Y X) where X = Fact Y, Y = 2 ? 3"}) {
    Graph g = testing::goal_graph(l, goal);
    std::string printed = print_with_sharing(g);
    Graph h = testing::goal_graph(l, printed);
    CHECK_MESSAGE(testing::canonical(h) == testing::canonical(g), printed);
  }
  Graph g = testing::goal_graph(l, "(1+X)+(X+2) where X = (0 ? 1)");
  CHECK(print_with_sharing(g).find(" where S") != std::string::npos);
}

}
