#include "treebench/grammar.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace treebench {

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

std::string Production::rhs_string() const {
  std::string out;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (i) out += ' ';
    out += rhs[i];
  }
  return out;
}

void extract_productions(const Tree& tree, std::vector<Production>& out) {
  if (tree.is_leaf()) return;
  Production production;
  production.lhs = tree.label;
  production.rhs.reserve(tree.children.size());
  for (const Tree& child : tree.children) production.rhs.push_back(child.label);
  out.push_back(std::move(production));
  for (const Tree& child : tree.children) extract_productions(child, out);
}

std::vector<Production> extract_productions(const Tree& tree) {
  std::vector<Production> out;
  extract_productions(tree, out);
  return out;
}

Grammar Grammar::learn(const std::vector<Tree>& trees) {
  std::map<Production, std::int64_t> counts;
  std::vector<Production> buffer;
  for (const Tree& tree : trees) {
    buffer.clear();
    extract_productions(tree, buffer);
    for (Production& production : buffer) ++counts[std::move(production)];
  }
  return from_counts(counts);
}

Grammar Grammar::from_counts(
    const std::map<Production, std::int64_t>& counts) {
  Grammar grammar;
  for (const auto& [production, count] : counts) {
    if (count <= 0)
      throw std::invalid_argument("rule counts must be positive");
    grammar.rules_[production].count = count;
    grammar.lhs_totals_[production.lhs] += count;
  }
  for (auto& [production, info] : grammar.rules_)
    info.prob = static_cast<double>(info.count) /
                static_cast<double>(grammar.lhs_totals_[production.lhs]);
  grammar.rebuild_indexes();
  return grammar;
}

Grammar Grammar::from_rules(RuleMap rules) {
  Grammar grammar;
  grammar.rules_ = std::move(rules);
  for (const auto& [production, info] : grammar.rules_)
    grammar.lhs_totals_[production.lhs] += info.count;
  grammar.rebuild_indexes();
  return grammar;
}

void Grammar::rebuild_indexes() {
  nonterminals_.clear();
  terminals_.clear();
  for (const auto& [production, info] : rules_)
    nonterminals_.insert(production.lhs);
  for (const auto& [production, info] : rules_)
    for (const std::string& symbol : production.rhs)
      if (!nonterminals_.count(symbol)) terminals_.insert(symbol);
}

std::int64_t Grammar::occurrence_total() const {
  std::int64_t total = 0;
  for (const auto& [production, info] : rules_) total += info.count;
  return total;
}

bool Grammar::has_symbol(const std::string& symbol) const {
  return nonterminals_.count(symbol) || terminals_.count(symbol);
}

void Grammar::save(std::ostream& out, const std::string& header) const {
  if (!header.empty()) out << "# " << header << "\n";
  // (LHS, descending count, RHS) order
  std::vector<const std::pair<const Production, RuleInfo>*> sorted;
  sorted.reserve(rules_.size());
  for (const auto& entry : rules_) sorted.push_back(&entry);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) {
                     if (a->first.lhs != b->first.lhs)
                       return a->first.lhs < b->first.lhs;
                     if (a->second.count != b->second.count)
                       return a->second.count > b->second.count;
                     return a->first.rhs < b->first.rhs;
                   });
  for (const auto* entry : sorted) {
    out << entry->first.lhs << '\t' << entry->first.rhs_string() << '\t'
        << entry->second.count << '\t' << format_double(entry->second.prob)
        << '\n';
  }
}

void Grammar::save_file(const std::string& path,
                        const std::string& header) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write grammar file: " + path);
  save(out, header);
}

Grammar Grammar::load(std::istream& in) {
  RuleMap rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream row(line);
    std::string lhs, rhs_text, count_text, prob_text;
    if (!std::getline(row, lhs, '\t') || !std::getline(row, rhs_text, '\t') ||
        !std::getline(row, count_text, '\t') ||
        !std::getline(row, prob_text))
      throw std::runtime_error("grammar line " + std::to_string(line_no) +
                               ": expected LHS\\tRHS\\tCOUNT\\tPROB");
    Production production;
    production.lhs = lhs;
    std::istringstream rhs_in(rhs_text);
    std::string symbol;
    while (rhs_in >> symbol) production.rhs.push_back(symbol);
    if (production.rhs.empty())
      throw std::runtime_error("grammar line " + std::to_string(line_no) +
                               ": empty right-hand side");
    RuleInfo info;
    info.count = std::stoll(count_text);
    info.prob = std::stod(prob_text);
    if (!rules.emplace(std::move(production), info).second)
      throw std::runtime_error("grammar line " + std::to_string(line_no) +
                               ": duplicate rule");
  }
  return from_rules(std::move(rules));
}

Grammar Grammar::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grammar file: " + path);
  return load(in);
}

GrammarStats compute_stats(const Grammar& grammar,
                           const std::vector<TaggedSentence>& corpus,
                           std::int64_t learn_time_ms) {
  GrammarStats stats;
  stats.terminal_types = grammar.terminals().size();
  stats.nonterminal_types = grammar.nonterminals().size();
  stats.pattern_types = grammar.rule_count();
  stats.pattern_occurrences = grammar.occurrence_total();
  stats.learn_time_ms = learn_time_ms;

  std::set<std::pair<std::string, std::string>> tag_pairs;
  std::set<std::pair<std::string, std::string>> word_tags;
  std::set<std::string> words;
  for (const TaggedSentence& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i + 1 < sentence.size()) {
        tag_pairs.insert({sentence[i].tag, sentence[i + 1].tag});
        ++stats.tag_tag_pair_count;
      }
      word_tags.insert({sentence[i].word, sentence[i].tag});
      words.insert(sentence[i].word);
      ++stats.token_count;
    }
  }
  stats.tag_tag_pair_types = tag_pairs.size();
  stats.word_tag_pair_types = word_tags.size();
  stats.word_types = words.size();
  return stats;
}

void write_stats_kv(std::ostream& out, const GrammarStats& stats) {
  out << "terminal_types=" << stats.terminal_types << '\n'
      << "nonterminal_types=" << stats.nonterminal_types << '\n'
      << "pattern_types=" << stats.pattern_types << '\n'
      << "pattern_occurrences=" << stats.pattern_occurrences << '\n'
      << "tag_tag_pair_types=" << stats.tag_tag_pair_types << '\n'
      << "tag_tag_pair_count=" << stats.tag_tag_pair_count << '\n'
      << "word_tag_pair_types=" << stats.word_tag_pair_types << '\n'
      << "word_types=" << stats.word_types << '\n'
      << "token_count=" << stats.token_count << '\n'
      << "learn_time_ms=" << stats.learn_time_ms << '\n';
}

void write_stats_csv(std::ostream& out, const GrammarStats& stats,
                     const std::string& pos_set, bool with_header) {
  if (with_header)
    out << "pos_set,terminal_types,nonterminal_types,pattern_types,"
           "pattern_occurrences,tag_tag_pair_types,tag_tag_pair_count,"
           "word_tag_pair_types,word_types,token_count,learn_time_ms\n";
  out << pos_set << ',' << stats.terminal_types << ','
      << stats.nonterminal_types << ',' << stats.pattern_types << ','
      << stats.pattern_occurrences << ',' << stats.tag_tag_pair_types << ','
      << stats.tag_tag_pair_count << ',' << stats.word_tag_pair_types << ','
      << stats.word_types << ',' << stats.token_count << ','
      << stats.learn_time_ms << '\n';
}

}  // namespace treebench
