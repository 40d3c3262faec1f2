#include "treebench/earley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treebench/tree.hpp"

namespace treebench {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string emit_parse_tree(const ParseTree& tree) {
  if (tree.is_leaf()) return tree.label;
  std::string out = "(";
  out += tree.label;
  for (const ParseTree& child : tree.children) {
    out += ' ';
    out += emit_parse_tree(child);
  }
  out += ')';
  return out;
}

namespace {

ParseTree parse_tree_node(std::string_view text, std::size_t& pos);

void skip_space(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
}

std::string read_atom(std::string_view text, std::size_t& pos) {
  std::size_t begin = pos;
  while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
         !std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
  return std::string(text.substr(begin, pos - begin));
}

ParseTree parse_tree_node(std::string_view text, std::size_t& pos) {
  std::size_t open_at = pos;
  ++pos;  // '('
  skip_space(text, pos);
  if (pos >= text.size() || text[pos] == '(' || text[pos] == ')')
    throw BracketError("expected node label", open_at);
  ParseTree node;
  node.label = read_atom(text, pos);
  for (;;) {
    skip_space(text, pos);
    if (pos >= text.size())
      throw BracketError("unbalanced parentheses: missing ')'", open_at);
    if (text[pos] == ')') {
      ++pos;
      break;
    }
    if (text[pos] == '(') {
      node.children.push_back(parse_tree_node(text, pos));
    } else {
      ParseTree leaf;
      leaf.label = read_atom(text, pos);
      node.children.push_back(std::move(leaf));
    }
  }
  return node;
}

}  // namespace

ParseTree parse_tree_from_text(std::string_view text) {
  std::size_t pos = 0;
  skip_space(text, pos);
  if (pos >= text.size() || text[pos] != '(')
    throw BracketError("expected '('", pos);
  ParseTree tree = parse_tree_node(text, pos);
  skip_space(text, pos);
  if (pos != text.size())
    throw BracketError("trailing text after tree", pos);
  return tree;
}

UnknownSymbolError::UnknownSymbolError(const std::string& symbol,
                                       std::size_t position)
    : std::runtime_error("unknown symbol '" + symbol + "' at position " +
                         std::to_string(position)),
      symbol_(symbol),
      position_(position) {}

EarleyParser::EarleyParser(const Grammar& grammar) {
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = symbol_ids_.try_emplace(
        name, static_cast<int>(symbol_names_.size()));
    if (fresh) symbol_names_.push_back(name);
    return it->second;
  };
  // Grammar iterates rules in deterministic (lhs, rhs) order, which fixes
  // symbol ids and rule ids.
  for (const auto& [production, info] : grammar.rules()) {
    CompiledRule rule;
    rule.lhs = intern(production.lhs);
    rule.rhs.reserve(production.rhs.size());
    for (const std::string& symbol : production.rhs)
      rule.rhs.push_back(intern(symbol));
    rule.log_prob = info.prob > 0.0 ? std::log(info.prob) : kNegInf;
    if (rule.rhs.size() >= 256)
      throw std::invalid_argument("rule right-hand side too long");
    rules_.push_back(std::move(rule));
  }
  if (rules_.size() >= (1u << 20))
    throw std::invalid_argument("grammar too large for the chart index");
  rules_for_.resize(symbol_names_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i)
    rules_for_[rules_[i].lhs].push_back(static_cast<int>(i));
}

int EarleyParser::symbol_id(const std::string& name) const {
  auto it = symbol_ids_.find(name);
  return it == symbol_ids_.end() ? -1 : it->second;
}

const std::string& EarleyParser::symbol_name(int id) const {
  return symbol_names_.at(static_cast<std::size_t>(id));
}

bool EarleyParser::has_rules(int symbol) const {
  return symbol >= 0 && static_cast<std::size_t>(symbol) < rules_for_.size() &&
         !rules_for_[symbol].empty();
}

std::vector<int> EarleyParser::compile_input(
    const std::vector<std::string>& tags) const {
  std::vector<int> ids;
  ids.reserve(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    int id = symbol_id(tags[i]);
    if (id < 0) throw UnknownSymbolError(tags[i], i);
    ids.push_back(id);
  }
  return ids;
}

bool Chart::Edge::complete(const EarleyParser& parser) const {
  return dot == static_cast<int>(parser.rules_[rule].rhs.size());
}

Chart::Chart(const EarleyParser& parser, std::vector<int> input)
    : parser_(parser), input_(std::move(input)) {
  if (input_.size() >= 4096)
    throw std::invalid_argument("sentence too long for the chart index");
  waiting_.resize(input_.size() + 1);
  completed_.resize(input_.size() + 1);
}

std::uint64_t Chart::pack_key(int rule, int dot, int start, int end) {
  return (static_cast<std::uint64_t>(rule) << 32) |
         (static_cast<std::uint64_t>(dot) << 24) |
         (static_cast<std::uint64_t>(start) << 12) |
         static_cast<std::uint64_t>(end);
}

int Chart::find_edge(int rule, int dot, int start, int end) const {
  auto it = index_.find(pack_key(rule, dot, start, end));
  return it == index_.end() ? -1 : it->second;
}

void Chart::consumed_signature(int edge_id, std::string& out) const {
  const Edge& e = edges_[edge_id];
  if (e.dot == 0) return;
  if (e.prev >= 0) consumed_signature(e.prev, out);
  out += ' ';
  if (e.child >= 0) {
    out += edge_signature(e.child);
  } else {
    const auto& rule = parser_.rules_[e.rule];
    out += parser_.symbol_names_[rule.rhs[e.dot - 1]];
  }
}

std::string Chart::edge_signature(int edge_id) const {
  const Edge& e = edges_[edge_id];
  std::string out = "(";
  out += parser_.symbol_names_[parser_.rules_[e.rule].lhs];
  consumed_signature(edge_id, out);
  out += ')';
  return out;
}

int Chart::add_edge(int rule, int dot, int start, int end, double log_prob,
                    int prev, int child) {
  const std::uint64_t key = pack_key(rule, dot, start, end);
  auto [it, fresh] = index_.try_emplace(key, static_cast<int>(edges_.size()));
  if (fresh) {
    edges_.push_back(Edge{rule, dot, start, end, log_prob, prev, child});
    agenda_.push_back(it->second);
    return it->second;
  }

  const int id = it->second;
  Edge& existing = edges_[id];
  if (log_prob > existing.log_prob) {
    existing.log_prob = log_prob;
    existing.prev = prev;
    existing.child = child;
    agenda_.push_back(id);  // re-propagate the improvement
    return -1;
  }
  if (log_prob == existing.log_prob &&
      (existing.prev != prev || existing.child != child)) {
    // Equal-probability derivations: keep the lexicographically smaller
    // bracketing so the result does not depend on agenda order.
    auto partial = [&](int p, int c) {
      std::string out;
      if (p >= 0) consumed_signature(p, out);
      out += ' ';
      if (c >= 0) {
        out += edge_signature(c);
      } else {
        out += parser_.symbol_names_[parser_.rules_[rule].rhs[dot - 1]];
      }
      return out;
    };
    if (partial(prev, child) < partial(existing.prev, existing.child)) {
      existing.prev = prev;
      existing.child = child;
    }
  }
  return -1;
}

int Chart::predict(int position, int needed_symbol) {
  int inserted = 0;
  if (!parser_.has_rules(needed_symbol)) return 0;
  for (int rule_id : parser_.rules_for_[needed_symbol]) {
    if (add_edge(rule_id, 0, position, position,
                 parser_.rules_[rule_id].log_prob, -1, -1) >= 0)
      ++inserted;
  }
  predictor_insertions_ += static_cast<std::uint64_t>(inserted);
  return inserted;
}

void Chart::advance(int waiter_id, int completed_id) {
  const Edge& waiter = edges_[waiter_id];
  const Edge& done = edges_[completed_id];
  add_edge(waiter.rule, waiter.dot + 1, waiter.start, done.end,
           waiter.log_prob + done.log_prob, waiter_id, completed_id);
}

void Chart::step(int edge_id) {
  const Edge snapshot = edges_[edge_id];
  const auto& rule = parser_.rules_[snapshot.rule];

  if (snapshot.dot < static_cast<int>(rule.rhs.size())) {
    const int next = rule.rhs[snapshot.dot];
    const int at = snapshot.end;
    // scanner
    if (at < static_cast<int>(input_.size()) && input_[at] == next)
      add_edge(snapshot.rule, snapshot.dot + 1, snapshot.start, at + 1,
               snapshot.log_prob, edge_id, -1);
    // predictor
    if (parser_.has_rules(next)) predict(at, next);
    if (!edges_[edge_id].waiting_registered) {
      edges_[edge_id].waiting_registered = true;
      waiting_[at][next].push_back(edge_id);
    }
    // attach constituents that completed before this edge appeared
    auto it = completed_[at].find(next);
    if (it != completed_[at].end()) {
      const auto& done = it->second;
      for (std::size_t i = 0; i < done.size(); ++i) advance(edge_id, done[i]);
    }
  } else {
    const int at = snapshot.start;
    if (!edges_[edge_id].completed_registered) {
      edges_[edge_id].completed_registered = true;
      completed_[at][rule.lhs].push_back(edge_id);
    }
    auto it = waiting_[at].find(rule.lhs);
    if (it != waiting_[at].end()) {
      const auto& waiters = it->second;
      for (std::size_t i = 0; i < waiters.size(); ++i)
        advance(waiters[i], edge_id);
    }
  }
}

int Chart::agenda_pop() {
  return agenda_[agenda_head_++];
}

void Chart::run() {
  while (!agenda_empty()) step(agenda_pop());
}

bool Chart::run_until(std::chrono::steady_clock::time_point deadline,
                      std::uint64_t max_edges) {
  std::uint32_t tick = 0;
  while (!agenda_empty()) {
    step(agenda_pop());
    if ((++tick & 1023u) == 0) {
      if (edges_.size() > max_edges) return false;
      if (deadline != std::chrono::steady_clock::time_point{} &&
          std::chrono::steady_clock::now() >= deadline)
        return false;
    }
  }
  return true;
}

int Chart::best_complete(int symbol, int start, int end) const {
  if (start < 0 || static_cast<std::size_t>(start) >= completed_.size())
    return -1;
  auto it = completed_[start].find(symbol);
  if (it == completed_[start].end()) return -1;
  int best = -1;
  for (int id : it->second) {
    const Edge& e = edges_[id];
    if (e.end != end) continue;
    if (best < 0 || e.log_prob > edges_[best].log_prob) {
      best = id;
    } else if (e.log_prob == edges_[best].log_prob &&
               edge_signature(id) < edge_signature(best)) {
      best = id;
    }
  }
  return best;
}

ParseTree Chart::build_tree(int edge_id) const {
  const Edge& e = edges_[edge_id];
  const auto& rule = parser_.rules_[e.rule];

  ParseTree node;
  node.label = parser_.symbol_names_[rule.lhs];
  node.log_prob = rule.log_prob;

  std::vector<const Edge*> steps;  // dot steps, last first
  for (const Edge* walk = &e; walk->dot > 0; walk = &edges_[walk->prev])
    steps.push_back(walk);
  node.children.resize(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Edge* step_edge = steps[steps.size() - 1 - i];
    if (step_edge->child >= 0) {
      node.children[i] = build_tree(step_edge->child);
      node.log_prob += node.children[i].log_prob;
    } else {
      node.children[i].label =
          parser_.symbol_names_[rule.rhs[step_edge->dot - 1]];
    }
  }
  return node;
}

EarleyParser::Outcome EarleyParser::parse(
    const std::vector<std::string>& tags) const {
  return parse(tags, Options{});
}

EarleyParser::Outcome EarleyParser::parse(const std::vector<std::string>& tags,
                                          const Options& options) const {
  if (tags.empty())
    throw std::invalid_argument("cannot parse an empty tag sequence");
  std::vector<int> input = compile_input(tags);

  Outcome outcome;
  const int root = symbol_id(options.root);
  if (root < 0 || !has_rules(root)) return outcome;  // nothing derivable

  Chart chart(*this, std::move(input));
  chart.predict(0, root);

  auto deadline = std::chrono::steady_clock::time_point{};
  if (options.timeout_ms > 0)
    deadline = std::chrono::steady_clock::now() +
               std::chrono::milliseconds(options.timeout_ms);
  const bool finished = chart.run_until(deadline, options.max_edges);

  outcome.predictor_insertions = chart.predictor_insertions();
  outcome.edge_count = chart.edge_count();
  if (!finished) {
    outcome.timed_out = true;  // timeout reads as no parse
    return outcome;
  }
  const int best =
      chart.best_complete(root, 0, static_cast<int>(tags.size()));
  if (best >= 0) outcome.tree = chart.build_tree(best);
  return outcome;
}

}  // namespace treebench
