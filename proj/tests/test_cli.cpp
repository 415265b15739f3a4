#include "bubblefl/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string program_file(const std::string& text) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("bubblefl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".fl");
  std::ofstream(path) << text;
  return path.string();
}

Result run(std::initializer_list<std::string> extra, const std::string& text = "") {
  std::vector<std::string> args{"bubblefl", "run", program_file(text)};
  args.insert(args.end(), extra);
  std::vector<const char*> argv;
  for (auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = bfl::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  std::filesystem::remove(args[2]);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  CHECK(run({"--goal", "1 + 1"}).code == 0);
  CHECK(run({"--goal", "1 / 0"}).code == 1);
  CHECK(run({"--goal", "loop", "--max-rounds", "20"}).code == 2);
  Result bad = run({"--goal", "(1 +"});
  CHECK(bad.code == 3);
  CHECK(bad.err.starts_with("error: "));
  CHECK(run({"--goal", "nothing 1"}).code == 3);
  CHECK(run({"--goal", "1", "--mode", "whnf"}).code == 3);
  CHECK(run({"--goal", "1", "--stats", "--stats-json"}).code == 3);
  CHECK(run({"--goal", "1"}, "f x x = 1\n").code == 3);
}

TEST_CASE("outcomes are printed as they are found") {
  Result r = run({"--goal", "(1/0) ? 3"});
  CHECK(r.out == "value: 3\nfailure\n");
  CHECK(r.code == 0);
}

TEST_CASE("distinct and sorted") {
  CHECK(run({"--goal", "coin + coin", "--distinct", "--sorted"}).out == "value: 0\nvalue: 1\nvalue: 2\n");
  CHECK(run({"--goal", "coin + coin", "--sorted"}).out ==
        "value: 0\nvalue: 1\nvalue: 1\nvalue: 2\n");
  CHECK(run({"--goal", "(1/0) ? 2 ? 1", "--sorted"}).out == "value: 1\nvalue: 2\nfailure\n");
}

TEST_CASE("first k values") {
  CHECK(run({"--goal", "1 ? 2 ? 3", "--first", "2"}).out == "value: 1\nvalue: 2\n");
  CHECK(run({"--goal", "1 ? 2 ? 3", "--first", "1", "--strategy", "substitution-oracle"}).out ==
        "value: 1\n");
  CHECK(run({"--goal", "1", "--first", "1", "--all"}).code == 3);
}

TEST_CASE("statistics") {
  Result r = run({"--goal", "(((3/X)+(X*2))-4) where X = 0 ? 1", "--stats"});
  CHECK(r.out.find("bubblings=1\nbubbling_copied=6\n") != std::string::npos);
  CHECK(r.out.starts_with("failure\nvalue: 1\nrounds="));

  Result j = run({"--goal", "(((3/X)+(X*2))-4) where X = 0 ? 1", "--strategy", "copying",
                  "--stats-json"});
  auto last = j.out.substr(j.out.rfind('{'));
  auto doc = nlohmann::json::parse(last);
  CHECK(doc["bubbling_copied"] == 8);
  CHECK(doc["bubblings"] == 1);
  CHECK(doc.contains("peak_nodes"));
}

TEST_CASE("trace lines") {
  Result r = run({"--goal", "(Fact X + Fibo X) where X = 2 ? 3", "--trace", "--sorted"});
  CHECK(r.out.find(" ap=3 k=2 copies=6\n") != std::string::npos);
  CHECK(r.out.starts_with("trace: bubble choice=#"));
  CHECK(r.out.ends_with("value: 3\nvalue: 8\n"));
}

TEST_CASE("dump trees") {
  Result r = run({"--dump-trees", "--no-prelude"}, "data Nat = Z | S Nat\nleq Z _ = True\n"
                                                   "leq (S _) Z = False\nleq (S x) (S y) = leq x y\n");
  CHECK(r.code == 0);
  CHECK(r.out == "leq(X1, X2) [pos 1]\n"
                 "  leq(Z, X2) => True\n"
                 "  leq(S(X3), X2) [pos 2]\n"
                 "    leq(S(X3), Z) => False\n"
                 "    leq(S(X3), S(X4)) => leq(X3, X4)\n");
  CHECK(run({}).code == 3);
}

TEST_CASE("prelude switches") {
  CHECK(run({"--goal", "Fact 3", "--prelude"}).out == "value: 6\n");
  CHECK(run({"--goal", "Fact 3", "--no-prelude"}).code == 3);
  CHECK(run({"--goal", "Fact 3", "--prelude", "--no-prelude"}).code == 3);
}

TEST_CASE("head normal form") {
  CHECK(run({"--goal", "Cons (1+1) loop", "--mode", "hnf"}).out == "value: Cons((1 + 1), loop)\n");
}

TEST_CASE("strategies agree") {
  for (const char* s : {"bubbling", "copying", "substitution-oracle"})
    CHECK(run({"--goal", "(1+X)+(X+2) where X = 0 ? 1", "--strategy", s, "--sorted"}).out ==
          "value: 3\nvalue: 5\n");
  CHECK(run({"--goal", "coin", "--strategy", "substitution-oracle"}).code == 3);
}

TEST_CASE("invariant checking") {
  Result r = run({"--goal", "(Fact X + Fibo X) where X = 2 ? 3", "--check-invariants"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
}

TEST_CASE("missing file") {
  const char* argv[] = {"bubblefl", "run", "/nonexistent/prog.fl", "--goal", "1"};
  std::ostringstream out, err;
  CHECK(bfl::run_cli(5, argv, out, err) == 3);
  CHECK(err.str().find("cannot read") != std::string::npos);
}

}
