#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "treebench/prune.hpp"

using namespace treebench;

namespace {

Production make_rule(const std::string& lhs, const std::string& rhs) {
  Production p;
  p.lhs = lhs;
  std::istringstream in(rhs);
  std::string symbol;
  while (in >> symbol) p.rhs.push_back(symbol);
  return p;
}

// S -> A B (6), S -> A (4); A -> x (8), A -> y (2); B -> z (1)
Grammar toy_grammar() {
  std::map<Production, std::int64_t> counts;
  counts[make_rule("S", "A B")] = 6;
  counts[make_rule("S", "A")] = 4;
  counts[make_rule("A", "x")] = 8;
  counts[make_rule("A", "y")] = 2;
  counts[make_rule("B", "z")] = 1;
  return Grammar::from_counts(counts);
}

bool has_rule(const Grammar& g, const std::string& lhs,
              const std::string& rhs) {
  for (const auto& [production, info] : g.rules())
    if (production.lhs == lhs && production.rhs_string() == rhs) return true;
  return false;
}

Grammar corpus_grammar() {
  std::ifstream in(std::string(TREEBENCH_CORPUS_DIR) + "/wsj_0007.mrg");
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto raw = parse_bracketed(buffer.str());
  std::vector<Tree> trees;
  for (const Tree& t : raw)
    if (auto n = normalize_tree(t, PosMapping::penn_default(), {}))
      trees.push_back(*n);
  return Grammar::learn(trees);
}

}  // namespace

TEST_CASE("zero thresholds keep the grammar unchanged") {
  Grammar g = toy_grammar();
  PruneResult result = prune(g, {});
  CHECK(result.grammar.rules() == g.rules());
  CHECK(result.report.pattern_occurrences == 21);
  CHECK(result.report.pattern_types == 5);
  CHECK(result.report.nonterminal_types == 3);
}

TEST_CASE("count threshold drops rare rules and recomputes NT") {
  PruneResult result = prune(toy_grammar(), {.min_count = 5});
  CHECK(result.report.pattern_types == 2);  // S->A B, A->x
  CHECK(result.report.pattern_occurrences == 14);
  CHECK(result.report.nonterminal_types == 2);  // B is gone
  CHECK(has_rule(result.grammar, "S", "A B"));
  CHECK(!has_rule(result.grammar, "B", "z"));
  // surviving probabilities stay as learned unless renormalizing
  for (const auto& [production, info] : result.grammar.rules())
    if (production.lhs == "S") CHECK(info.prob == doctest::Approx(0.6));
}

TEST_CASE("probability threshold keeps every lhs's strongest rules") {
  PruneResult result = prune(toy_grammar(), {.min_prob = 0.5});
  CHECK(has_rule(result.grammar, "S", "A B"));   // 0.6
  CHECK(!has_rule(result.grammar, "S", "A"));    // 0.4
  CHECK(has_rule(result.grammar, "A", "x"));     // 0.8
  CHECK(has_rule(result.grammar, "B", "z"));     // 1.0
  CHECK(result.report.nonterminal_types == 3);
}

TEST_CASE("a single-rule lhs survives any pure probability threshold") {
  for (double p : {0.05, 0.5, 0.99, 1.0}) {
    PruneResult result = prune(toy_grammar(), {.min_prob = p});
    CHECK(has_rule(result.grammar, "B", "z"));
  }
}

TEST_CASE("probability exactly at the threshold survives") {
  PruneResult result = prune(toy_grammar(), {.min_prob = 0.4});
  CHECK(has_rule(result.grammar, "S", "A"));  // prob exactly 0.4
  // and a hair above the stored probability prunes it
  PruneResult above = prune(toy_grammar(), {.min_prob = 0.4 + 1e-9});
  CHECK(!has_rule(above.grammar, "S", "A"));
}

TEST_CASE("mixed pruning equals the intersection of the pure prunings") {
  Grammar g = corpus_grammar();
  for (auto [n, p] : std::vector<std::pair<std::int64_t, double>>{
           {2, 0.1}, {3, 0.25}, {1, 0.0}, {5, 0.5}}) {
    PruneResult mixed = prune(g, {.min_count = n, .min_prob = p});
    PruneResult by_count = prune(g, {.min_count = n});
    PruneResult by_prob = prune(g, {.min_prob = p});
    Grammar::RuleMap expected;
    for (const auto& [production, info] : by_count.grammar.rules())
      if (by_prob.grammar.rules().count(production))
        expected.emplace(production, info);
    CHECK(mixed.grammar.rules() == expected);
  }
}

TEST_CASE("raising a threshold only shrinks the survivor set") {
  Grammar g = corpus_grammar();
  PruneResult prev = prune(g, {.min_count = 1});
  for (std::int64_t n : {2, 3, 5, 9}) {
    PruneResult next = prune(g, {.min_count = n});
    for (const auto& [production, info] : next.grammar.rules())
      CHECK(prev.grammar.rules().count(production));
    prev = std::move(next);
  }
  PruneResult loose = prune(g, {.min_prob = 0.05});
  for (double p : {0.1, 0.3, 0.8}) {
    PruneResult tight = prune(g, {.min_prob = p});
    for (const auto& [production, info] : tight.grammar.rules())
      CHECK(loose.grammar.rules().count(production));
  }
}

TEST_CASE("low probability thresholds cannot lose nonterminals") {
  Grammar g = corpus_grammar();
  std::size_t max_rules_per_lhs = 0;
  std::map<std::string, std::size_t> per_lhs;
  for (const auto& [production, info] : g.rules())
    max_rules_per_lhs =
        std::max(max_rules_per_lhs, ++per_lhs[production.lhs]);
  const double safe = 1.0 / static_cast<double>(max_rules_per_lhs);
  PruneResult result = prune(g, {.min_prob = safe});
  CHECK(result.report.nonterminal_types == g.nonterminals().size());
}

TEST_CASE("report fields match the surviving grammar exactly") {
  Grammar g = corpus_grammar();
  PruneResult result = prune(g, {.min_count = 2, .min_prob = 0.1});
  CHECK(result.report.pattern_occurrences ==
        result.grammar.occurrence_total());
  CHECK(result.report.pattern_types == result.grammar.rule_count());
  CHECK(result.report.nonterminal_types ==
        result.grammar.nonterminals().size());
}

TEST_CASE("renormalization restores per-lhs unit mass") {
  PruneResult result =
      prune(toy_grammar(), {.min_count = 5, .renormalize = true});
  for (const auto& [production, info] : result.grammar.rules())
    CHECK(info.prob == doctest::Approx(1.0));  // single survivor per lhs

  PruneResult partial =
      prune(toy_grammar(), {.min_count = 2, .renormalize = true});
  std::map<std::string, double> sums;
  for (const auto& [production, info] : partial.grammar.rules())
    sums[production.lhs] += info.prob;
  for (const auto& [lhs, sum] : sums) CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("pruning everything yields a valid empty grammar") {
  PruneResult result = prune(toy_grammar(), {.min_count = 1000});
  CHECK(result.grammar.empty());
  CHECK(result.report.pattern_types == 0);
  CHECK(result.report.nonterminal_types == 0);
  CHECK(result.report.pattern_occurrences == 0);
}

TEST_CASE("sweep preserves spec order and emits the CSV schema") {
  Grammar g = toy_grammar();
  std::vector<PruneSpec> specs = {
      {}, {.min_count = 5}, {.min_prob = 0.5}, {.min_count = 2,
                                                .min_prob = 0.4}};
  auto reports = sweep(g, specs);
  REQUIRE(reports.size() == specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i)
    CHECK(reports[i].spec == specs[i]);
  CHECK(reports[0].pattern_types == 5);

  std::ostringstream out;
  write_sweep_csv(out, reports);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "min_count,min_prob,pa,pt,nt");
  std::getline(in, line);
  CHECK(line == "0,0,21,5,3");
}
