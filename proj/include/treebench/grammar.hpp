#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treebench/normalize.hpp"
#include "treebench/tree.hpp"

namespace treebench {

// A context-free production with an ordered right-hand side. Equality and
// ordering are structural.
struct Production {
  std::string lhs;
  std::vector<std::string> rhs;

  auto operator<=>(const Production&) const = default;

  std::string rhs_string() const;  // "DT NN"
};

struct RuleInfo {
  std::int64_t count = 0;
  double prob = 0.0;

  bool operator==(const RuleInfo&) const = default;
};

// Rule table with relative-frequency probabilities: P(lhs -> rhs) =
// count(lhs -> rhs) / sum over all rules with the same lhs. Nonterminals
// are the symbols that occur as an lhs; terminals are rhs symbols that
// never do. Immutable after construction.
class Grammar {
 public:
  using RuleMap = std::map<Production, RuleInfo>;

  Grammar() = default;

  // Counts productions over all trees and derives probabilities. An empty
  // corpus gives a valid empty grammar.
  static Grammar learn(const std::vector<Tree>& trees);

  // Builds a grammar from explicit counts (probabilities derived).
  static Grammar from_counts(const std::map<Production, std::int64_t>& counts);

  // Builds a grammar from explicit rules keeping the given probabilities
  // (used for pruned grammars, whose probabilities are pre-prune).
  static Grammar from_rules(RuleMap rules);

  const RuleMap& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  std::size_t rule_count() const { return rules_.size(); }
  std::int64_t occurrence_total() const;  // sum of rule counts

  const std::map<std::string, std::int64_t>& lhs_totals() const {
    return lhs_totals_;
  }
  const std::set<std::string>& nonterminals() const { return nonterminals_; }
  const std::set<std::string>& terminals() const { return terminals_; }
  bool has_symbol(const std::string& symbol) const;

  // Line format: LHS<TAB>RHS...<TAB>COUNT<TAB>PROB, '#' comments, sorted
  // by (LHS, descending COUNT, RHS) for stable diffs.
  void save(std::ostream& out, const std::string& header = "") const;
  void save_file(const std::string& path, const std::string& header = "") const;
  static Grammar load(std::istream& in);
  static Grammar load_file(const std::string& path);

 private:
  void rebuild_indexes();

  RuleMap rules_;
  std::map<std::string, std::int64_t> lhs_totals_;
  std::set<std::string> nonterminals_;
  std::set<std::string> terminals_;
};

// One production per internal node, in pre-order; leaves contribute none
// (word emissions belong to the tagger, not the grammar).
std::vector<Production> extract_productions(const Tree& tree);
void extract_productions(const Tree& tree, std::vector<Production>& out);

struct GrammarStats {
  std::size_t terminal_types = 0;
  std::size_t nonterminal_types = 0;
  std::size_t pattern_types = 0;
  std::int64_t pattern_occurrences = 0;
  std::size_t tag_tag_pair_types = 0;   // sentence-internal bigram types
  std::size_t word_tag_pair_types = 0;
  std::size_t word_types = 0;
  std::int64_t token_count = 0;
  std::int64_t tag_tag_pair_count = 0;  // bigram occurrences
  std::int64_t learn_time_ms = 0;
};

GrammarStats compute_stats(const Grammar& grammar,
                           const std::vector<TaggedSentence>& corpus,
                           std::int64_t learn_time_ms = 0);

void write_stats_kv(std::ostream& out, const GrammarStats& stats);
// One CSV row (with header when requested); pos_set labels the row.
void write_stats_csv(std::ostream& out, const GrammarStats& stats,
                     const std::string& pos_set, bool with_header);

}  // namespace treebench
