#include "treebench/normalize.hpp"

#include <algorithm>
#include <cctype>

namespace treebench {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

std::string normalize_label(const std::string& label) {
  if (label.empty() || label.front() == '-') return label;
  std::string_view view(label);
  for (;;) {
    std::size_t cut = view.find_last_of("-=");
    if (cut == std::string_view::npos || cut == 0) break;
    std::string_view suffix = view.substr(cut + 1);
    if (!all_digits(suffix)) break;
    if (view[cut] == '-' && suffix.size() < 2) break;  // -N kept, =N stripped
    view = view.substr(0, cut);
  }
  return std::string(view);
}

namespace {

std::optional<Tree> normalize_node(const Tree& tree, const PosMapping& mapping,
                                   const NormalizeOptions& options) {
  if (tree.is_leaf()) {
    if (tree.label == kEmptyElementTag) return std::nullopt;
    Tree leaf;
    leaf.label = options.compress ? mapping.apply(tree.label) : tree.label;
    leaf.token = tree.token;
    return leaf;
  }
  std::vector<Tree> children;
  children.reserve(tree.children.size());
  for (const Tree& child : tree.children) {
    if (auto kept = normalize_node(child, mapping, options))
      children.push_back(std::move(*kept));
  }
  if (children.empty()) return std::nullopt;  // emptied by trace removal
  Tree node;
  node.label = options.compress ? normalize_label(tree.label) : tree.label;
  node.children = std::move(children);
  return node;
}

}  // namespace

std::optional<Tree> normalize_tree(const Tree& tree, const PosMapping& mapping,
                                   const NormalizeOptions& options) {
  return normalize_node(tree, mapping, options);
}

namespace {

void collect_leaves(const Tree& tree, TaggedSentence& out) {
  if (tree.is_leaf()) {
    out.push_back({tree.token, tree.label});
    return;
  }
  for (const Tree& child : tree.children) collect_leaves(child, out);
}

}  // namespace

TaggedSentence extract_tagged_sentence(const Tree& tree) {
  TaggedSentence sentence;
  collect_leaves(tree, sentence);
  return sentence;
}

}  // namespace treebench
