#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treebench/grammar.hpp"

namespace treebench {

// Parse result over a tag sequence: same shape as Tree but leaves are POS
// tags and carry no words. log_prob of a node is the log probability of
// its own rule plus those of all rules below it (0 at leaves).
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  double log_prob = 0.0;

  bool is_leaf() const { return children.empty(); }
  bool operator==(const ParseTree&) const = default;
};

// Canonical bracketing with bare tags as leaves: (S (NP DT NN) (VP VB)).
std::string emit_parse_tree(const ParseTree& tree);
// Inverse of emit_parse_tree (log_prob is not serialized and reads as 0).
ParseTree parse_tree_from_text(std::string_view text);

class UnknownSymbolError : public std::runtime_error {
 public:
  UnknownSymbolError(const std::string& symbol, std::size_t position);
  const std::string& symbol() const { return symbol_; }
  std::size_t position() const { return position_; }

 private:
  std::string symbol_;
  std::size_t position_;
};

class Chart;

// Earley parser with Viterbi semantics: per chart key (rule, dot, start,
// end) only the max-probability edge is retained, so the result is the
// single best parse rather than a forest.
class EarleyParser {
 public:
  struct Options {
    std::string root = "S";
    std::int64_t timeout_ms = 10'000;      // <= 0 disables the deadline
    std::uint64_t max_edges = 20'000'000;  // chart budget; hit = timeout
  };

  struct Outcome {
    std::optional<ParseTree> tree;
    bool timed_out = false;
    std::uint64_t predictor_insertions = 0;
    std::uint64_t edge_count = 0;
  };

  explicit EarleyParser(const Grammar& grammar);

  // Best parse with the root label spanning the whole input, or absent.
  // Throws UnknownSymbolError for a tag outside the grammar's inventory,
  // std::invalid_argument for empty input.
  Outcome parse(const std::vector<std::string>& tags,
                const Options& options) const;
  Outcome parse(const std::vector<std::string>& tags) const;

  int symbol_id(const std::string& name) const;          // -1 when absent
  const std::string& symbol_name(int id) const;
  bool has_rules(int symbol) const;                      // usable as lhs
  std::size_t rule_count() const { return rules_.size(); }

  // Tag strings to symbol ids; throws UnknownSymbolError.
  std::vector<int> compile_input(const std::vector<std::string>& tags) const;

 private:
  friend class Chart;

  struct CompiledRule {
    int lhs;
    std::vector<int> rhs;
    double log_prob;
  };

  std::vector<CompiledRule> rules_;
  std::vector<std::vector<int>> rules_for_;  // symbol id -> rule ids
  std::vector<std::string> symbol_names_;
  std::unordered_map<std::string, int> symbol_ids_;
};

// Dotted-rule chart over a fixed input. The predictor, scanner and
// completer are reachable one step at a time (step()) so they can be
// exercised directly in tests; parse() drives them to exhaustion.
class Chart {
 public:
  struct Edge {
    int rule;
    int dot;
    int start;
    int end;
    double log_prob;  // log P(rule) + consumed children's log_probs
    int prev;         // same rule with dot-1 (-1 when dot == 0)
    int child;        // completed edge consumed last (-1 = scanned terminal)
    bool waiting_registered = false;
    bool completed_registered = false;

    bool complete(const EarleyParser& parser) const;
  };

  Chart(const EarleyParser& parser, std::vector<int> input);

  // Inserts one zero-dot edge per rule with the needed lhs, deduplicated;
  // returns the number actually inserted.
  int predict(int position, int needed_symbol);

  // Scanner/completer/predictor dispatch for one agenda item.
  void step(int edge_id);

  bool agenda_empty() const { return agenda_head_ >= agenda_.size(); }
  int agenda_pop();

  void run();
  // False when the deadline or the edge budget was exceeded.
  bool run_until(std::chrono::steady_clock::time_point deadline,
                 std::uint64_t max_edges);

  const Edge& edge(int id) const { return edges_[id]; }
  std::size_t edge_count() const { return edges_.size(); }
  int find_edge(int rule, int dot, int start, int end) const;  // -1 absent
  std::uint64_t predictor_insertions() const { return predictor_insertions_; }

  // Max-probability complete edge for (symbol, start, end); -1 absent.
  int best_complete(int symbol, int start, int end) const;

  ParseTree build_tree(int edge_id) const;

 private:
  int add_edge(int rule, int dot, int start, int end, double log_prob,
               int prev, int child);
  void advance(int waiter_id, int completed_id);
  // Bracket string of the consumed part; total order for breaking ties
  // between equal-probability derivations.
  void consumed_signature(int edge_id, std::string& out) const;
  std::string edge_signature(int edge_id) const;

  static std::uint64_t pack_key(int rule, int dot, int start, int end);

  const EarleyParser& parser_;
  std::vector<int> input_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> index_;
  // per position: symbol -> edges waiting for / constituents starting there
  std::vector<std::unordered_map<int, std::vector<int>>> waiting_;
  std::vector<std::unordered_map<int, std::vector<int>>> completed_;
  std::vector<int> agenda_;
  std::size_t agenda_head_ = 0;
  std::uint64_t predictor_insertions_ = 0;
};

}  // namespace treebench
