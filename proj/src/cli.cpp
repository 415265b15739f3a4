#include "bubblefl/cli.hpp"

#include "bubblefl/deftree.hpp"
#include "bubblefl/engine.hpp"
#include "bubblefl/error.hpp"
#include "bubblefl/oracle.hpp"
#include "bubblefl/parser.hpp"
#include "bubblefl/prelude.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace bfl {

namespace {

struct RunArgs {
  std::string file;
  std::string goal;
  std::string mode = "nf";
  std::string strategy = "bubbling";
  std::size_t max_rounds = 10000;
  bool all = false;
  std::optional<std::size_t> first;
  bool distinct = false;
  bool sorted = false;
  bool stats = false;
  bool stats_json = false;
  bool trace = false;
  bool check_invariants = false;
  bool dump_trees = false;
  bool prelude = false;
  bool no_prelude = false;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_stats(const EngineStats& s, bool json, std::ostream& out) {
  if (json) {
    nlohmann::ordered_json doc;
    doc["rounds"] = s.rounds;
    doc["rewrites"] = s.rewrites;
    doc["bubblings"] = s.bubblings;
    doc["bubbling_copied"] = s.bubbling_copied;
    doc["fork_copied"] = s.fork_copied;
    doc["peak_nodes"] = s.peak_nodes;
    out << doc.dump() << '\n';
    return;
  }
  out << "rounds=" << s.rounds << '\n'
      << "rewrites=" << s.rewrites << '\n'
      << "bubblings=" << s.bubblings << '\n'
      << "bubbling_copied=" << s.bubbling_copied << '\n'
      << "fork_copied=" << s.fork_copied << '\n'
      << "peak_nodes=" << s.peak_nodes << '\n';
}

int run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  auto text = read_file(args.file);
  if (!text) {
    err << "error: cannot read '" << args.file << "'\n";
    return 3;
  }
  std::vector<SourceText> sources;
  if (!args.no_prelude)
    sources.push_back({"<prelude>", std::string(prelude_source())});
  sources.push_back({args.file, std::move(*text)});
  Program program = parse_program(sources);
  DefTreeMap trees = build_all(program);

  if (args.dump_trees)
    for (SymbolId op : program.operations)
      out << dump_tree(trees.at(op), program);
  if (args.goal.empty()) {
    if (args.dump_trees)
      return 0;
    err << "error: --goal is required\n";
    return 3;
  }
  GoalAst goal = parse_goal(args.goal);
  Mode mode = args.mode == "hnf" ? Mode::HeadNormalForm : Mode::NormalForm;

  std::vector<Outcome> outcomes;
  EngineStats stats;
  if (args.strategy == "substitution-oracle") {
    SubstitutionOptions so;
    so.budget = args.max_rounds;
    so.mode = mode;
    outcomes = enumerate_by_substitution(program, trees, goal, so, &stats);
    if (args.first && outcomes.size() > *args.first) {
      std::size_t values = 0;
      auto it = std::find_if(outcomes.begin(), outcomes.end(), [&](const Outcome& o) {
        return o.kind == Outcome::Kind::Value && ++values > *args.first;
      });
      outcomes.erase(it, outcomes.end());
    }
  } else {
    EngineOptions eo;
    eo.mode = mode;
    eo.strategy = args.strategy == "copying" ? Strategy::Copying : Strategy::Bubbling;
    eo.budget = args.max_rounds;
    eo.first = args.first;
    eo.check_invariants = args.check_invariants;
    if (args.trace)
      eo.on_bubble = [&out](const BubbleEvent& e) {
        out << "trace: bubble choice=#" << e.choice << " dominator=#" << e.dominator
            << " ap=" << e.report.ap_size << " k=" << e.report.k
            << " copies=" << e.report.copies << '\n';
      };
    outcomes = enumerate_normal_forms(program, trees, goal, eo, &stats);
  }

  if (args.distinct) {
    std::set<std::string> seen;
    std::erase_if(outcomes, [&](const Outcome& o) {
      return o.kind == Outcome::Kind::Value && !seen.insert(o.term).second;
    });
  }
  if (args.sorted)
    std::stable_sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) {
      if (a.kind != b.kind)
        return a.kind < b.kind;
      return a.kind == Outcome::Kind::Value && a.term < b.term;
    });

  bool value = false;
  bool exhausted = false;
  for (const auto& o : outcomes) {
    out << to_string(o) << '\n';
    value = value || o.kind == Outcome::Kind::Value;
    exhausted = exhausted || o.kind == Outcome::Kind::BudgetExhausted;
  }
  if (args.stats || args.stats_json)
    print_stats(stats, args.stats_json, out);
  if (value)
    return 0;
  return exhausted ? 2 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluator for a small functional-logic language", "bubblefl"};
  app.require_subcommand(1);
  RunArgs args;
  auto* cmd = app.add_subcommand("run", "Evaluate a goal against a program");
  cmd->add_option("file", args.file, "Program file")->required();
  cmd->add_option("--goal", args.goal, "Expression to evaluate");
  cmd->add_option("--mode", args.mode, "nf or hnf")->check(CLI::IsMember({"nf", "hnf"}));
  cmd->add_option("--strategy", args.strategy, "bubbling, copying or substitution-oracle")
      ->check(CLI::IsMember({"bubbling", "copying", "substitution-oracle"}));
  cmd->add_option("--max-rounds", args.max_rounds, "Step budget across all alternatives")
      ->check(CLI::PositiveNumber);
  auto* all = cmd->add_flag("--all", args.all, "Report every outcome (default)");
  auto* first = cmd->add_option("--first", args.first, "Stop after k values")
                    ->check(CLI::PositiveNumber);
  all->excludes(first);
  cmd->add_flag("--distinct", args.distinct, "Drop repeated values");
  cmd->add_flag("--sorted", args.sorted, "Sort values lexicographically");
  auto* stats = cmd->add_flag("--stats", args.stats, "Print key=value statistics");
  auto* json = cmd->add_flag("--stats-json", args.stats_json, "Print statistics as JSON");
  stats->excludes(json);
  cmd->add_flag("--trace", args.trace, "Print one line per bubbling");
  cmd->add_flag("--check-invariants", args.check_invariants, "Validate the graph after every step");
  cmd->add_flag("--dump-trees", args.dump_trees, "Print definitional trees");
  auto* with = cmd->add_flag("--prelude", args.prelude, "Load the prelude (default)");
  auto* without = cmd->add_flag("--no-prelude", args.no_prelude, "Do not load the prelude");
  with->excludes(without);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }
  try {
    return run(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

} // namespace bfl
