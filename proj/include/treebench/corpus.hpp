#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treebench/normalize.hpp"
#include "treebench/tree.hpp"

namespace treebench {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads one bracketed file. Throws IoError when unreadable.
std::vector<Tree> load_treebank_file(const std::string& path);

// Concatenated text of the given files; a directory expands to its
// *.mrg / *.prd files in sorted order.
std::string read_corpus_text(const std::vector<std::string>& paths);

// 1-based inclusive range over the corpus prefix, measured either in
// source-file lines or in sentences.
struct CorpusRange {
  std::size_t first = 1;
  std::size_t last = 0;  // 0 = to the end
  enum class Unit { lines, sentences } unit = Unit::lines;
};

// Trees whose text lies entirely within the range (line mode keeps a tree
// iff it starts and ends inside the selected lines).
std::vector<Tree> trees_in_range(const std::string& corpus_text,
                                 const CorpusRange& range);
std::vector<Tree> parse_corpus(const std::string& corpus_text);

// Normalizes every tree, dropping degenerate sentences (counted into
// *skipped when given).
std::vector<Tree> normalize_corpus(const std::vector<Tree>& trees,
                                   const PosMapping& mapping,
                                   const NormalizeOptions& options,
                                   std::size_t* skipped = nullptr);

std::vector<TaggedSentence> tagged_corpus(const std::vector<Tree>& trees);

}  // namespace treebench
