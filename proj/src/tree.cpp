#include "treebench/tree.hpp"

#include <cstddef>

namespace treebench {

std::size_t Tree::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const Tree& child : children) n += child.leaf_count();
  return n;
}

BracketError::BracketError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at byte " + std::to_string(offset)),
      offset_(offset) {}

namespace {

bool is_delim(char c) {
  return c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' ||
         c == '\r' || c == '\f' || c == '\v';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && is_space(text[pos])) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  char peek() const { return text[pos]; }

  std::string atom() {
    std::size_t begin = pos;
    while (pos < text.size() && !is_delim(text[pos])) ++pos;
    return std::string(text.substr(begin, pos - begin));
  }
};

// node := '(' label? (node | token)* ')'
// An unlabeled node is legal only as the outermost wrapper; its children
// are spliced into the result list.
void parse_node(Cursor& cur, bool top_level, std::vector<Tree>& out) {
  std::size_t open_at = cur.pos;
  ++cur.pos;  // '('
  cur.skip_space();
  if (cur.pos >= cur.text.size())
    throw BracketError("unbalanced parentheses: unexpected end of input",
                       open_at);

  std::string label;
  if (cur.peek() != '(' && cur.peek() != ')') label = cur.atom();

  std::vector<Tree> children;
  std::string token;
  bool has_token = false;

  for (;;) {
    cur.skip_space();
    if (cur.pos >= cur.text.size())
      throw BracketError("unbalanced parentheses: missing ')'", open_at);
    char c = cur.peek();
    if (c == ')') {
      ++cur.pos;
      break;
    }
    if (c == '(') {
      if (has_token)
        throw BracketError(
            "node mixes a token with children", cur.pos);
      if (label.empty()) {
        if (!top_level)
          throw BracketError("unlabeled node below top level", open_at);
        parse_node(cur, false, out);  // wrapper: splice children
      } else {
        std::vector<Tree> sub;
        parse_node(cur, false, sub);
        for (Tree& t : sub) children.push_back(std::move(t));
      }
    } else {
      if (label.empty())
        throw BracketError("token in unlabeled node", cur.pos);
      if (has_token || !children.empty())
        throw BracketError("node mixes a token with children", cur.pos);
      token = cur.atom();
      has_token = true;
    }
  }

  if (label.empty()) return;  // wrapper already spliced
  if (!has_token && children.empty())
    throw BracketError("empty node (" + label + ")", open_at);

  Tree node;
  node.label = std::move(label);
  node.children = std::move(children);
  node.token = std::move(token);
  out.push_back(std::move(node));
}

}  // namespace

std::vector<Tree> parse_bracketed(std::string_view text) {
  Cursor cur{text};
  std::vector<Tree> trees;
  while (!cur.done()) {
    if (cur.peek() != '(')
      throw BracketError("expected '('", cur.pos);
    parse_node(cur, true, trees);
  }
  return trees;
}

namespace {

void emit_node(const Tree& tree, std::string& out) {
  out += '(';
  out += tree.label;
  if (tree.is_leaf()) {
    out += ' ';
    out += tree.token;
  } else {
    for (const Tree& child : tree.children) {
      out += ' ';
      emit_node(child, out);
    }
  }
  out += ')';
}

}  // namespace

std::string emit_bracketed(const Tree& tree) {
  std::string out;
  emit_node(tree, out);
  return out;
}

}  // namespace treebench
