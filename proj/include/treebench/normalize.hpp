#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treebench/pos_mapping.hpp"
#include "treebench/tree.hpp"

namespace treebench {

inline constexpr const char* kEmptyElementTag = "-NONE-";

struct TaggedWord {
  std::string word;
  std::string tag;

  bool operator==(const TaggedWord&) const = default;
};

using TaggedSentence = std::vector<TaggedWord>;

// Strips trailing numeric annotation suffixes from a category label:
// every '=N' gap index, and '-NN' coindexes of two or more digits.
// Single-digit '-N' suffixes are kept. Labels whose first character is
// '-' (punctuation-like tags, "-NONE-") are returned unchanged.
std::string normalize_label(const std::string& label);

struct NormalizeOptions {
  // Apply the POS mapping to leaf tags and normalize_label to internal
  // labels. Off reproduces the raw ("full POS set") treebank inventory.
  bool compress = true;
};

// Empty-element ("-NONE-") subtrees are removed in both modes, along with
// any internal node left childless, recursively. Returns nullopt when the
// whole tree is removed (degenerate sentence; caller may skip it).
std::optional<Tree> normalize_tree(const Tree& tree, const PosMapping& mapping,
                                   const NormalizeOptions& options = {});

// Left-to-right leaves as (token, preterminal label) pairs.
TaggedSentence extract_tagged_sentence(const Tree& tree);

}  // namespace treebench
