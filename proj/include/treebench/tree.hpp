#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treebench {

// One node of a constituency tree. Leaves carry the surface token and use
// the label as their POS tag; internal nodes have >= 1 child and no token.
struct Tree {
  std::string label;
  std::vector<Tree> children;
  std::string token;  // nonempty iff leaf

  bool is_leaf() const { return children.empty(); }
  std::size_t leaf_count() const;

  bool operator==(const Tree&) const = default;
};

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& message, std::size_t offset);

  // Byte offset into the input at which parsing failed.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Reads treebank-style bracketed text (any number of trees, whitespace
// insensitive). The unlabeled outer wrapper `( (S ...) )` used by Penn
// files is unwrapped silently. Empty input yields an empty list.
std::vector<Tree> parse_bracketed(std::string_view text);

// Canonical one-line bracketing; parse_bracketed(emit_bracketed(t))
// returns exactly {t}.
std::string emit_bracketed(const Tree& tree);

}  // namespace treebench
