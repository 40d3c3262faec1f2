#include "treebench/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace treebench {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool treebank_extension(const fs::path& path) {
  return path.extension() == ".mrg" || path.extension() == ".prd";
}

}  // namespace

std::vector<Tree> load_treebank_file(const std::string& path) {
  return parse_bracketed(read_file(path));
}

std::string read_corpus_text(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const std::string& entry : paths) {
    fs::path p(entry);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> from_dir;
      for (const auto& item : fs::directory_iterator(p)) {
        if (item.is_regular_file() && treebank_extension(item.path()))
          from_dir.push_back(item.path().string());
      }
      std::sort(from_dir.begin(), from_dir.end());
      files.insert(files.end(), from_dir.begin(), from_dir.end());
    } else if (fs::exists(p, ec)) {
      files.push_back(entry);
    } else {
      throw IoError("corpus path does not exist: " + entry);
    }
  }
  std::string text;
  for (const std::string& file : files) {
    text += read_file(file);
    if (!text.empty() && text.back() != '\n') text += '\n';
  }
  return text;
}

std::vector<Tree> parse_corpus(const std::string& corpus_text) {
  return parse_bracketed(corpus_text);
}

std::vector<Tree> trees_in_range(const std::string& corpus_text,
                                 const CorpusRange& range) {
  if (range.first == 0)
    throw std::invalid_argument("corpus ranges are 1-based");

  if (range.unit == CorpusRange::Unit::sentences) {
    std::vector<Tree> all = parse_bracketed(corpus_text);
    std::size_t last = range.last == 0 ? all.size()
                                       : std::min<std::size_t>(range.last,
                                                               all.size());
    if (range.first > last) return {};
    return std::vector<Tree>(all.begin() + (range.first - 1),
                             all.begin() + last);
  }

  // Line mode: keep the trees lying entirely within the selected lines.
  std::size_t begin_offset = 0;
  std::size_t end_offset = corpus_text.size();
  std::size_t line = 1;
  std::size_t pos = 0;
  if (range.first > 1) {
    while (pos < corpus_text.size() && line < range.first) {
      if (corpus_text[pos] == '\n') ++line;
      ++pos;
    }
    begin_offset = pos;
  }
  if (range.last != 0) {
    while (pos < corpus_text.size() && line <= range.last) {
      if (corpus_text[pos] == '\n') {
        ++line;
        if (line > range.last) break;
      }
      ++pos;
    }
    end_offset = pos;
  }
  if (begin_offset >= end_offset) return {};

  std::string_view window(corpus_text.data() + begin_offset,
                          end_offset - begin_offset);
  // Keep only complete outermost trees: a tree cut off by either line
  // boundary is dropped, not an error.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t tree_begin = 0;
  int depth = 0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const char c = window[i];
    if (c == '(') {
      if (depth == 0) tree_begin = i;
      ++depth;
    } else if (c == ')') {
      if (depth == 0) {
        spans.clear();  // entered mid-tree; drop the leading fragments
        continue;
      }
      if (--depth == 0) spans.push_back({tree_begin, i + 1});
    }
  }
  std::vector<Tree> trees;
  for (const auto& [from, to] : spans) {
    std::vector<Tree> parsed = parse_bracketed(window.substr(from, to - from));
    for (Tree& tree : parsed) trees.push_back(std::move(tree));
  }
  return trees;
}

std::vector<Tree> normalize_corpus(const std::vector<Tree>& trees,
                                   const PosMapping& mapping,
                                   const NormalizeOptions& options,
                                   std::size_t* skipped) {
  std::vector<Tree> out;
  out.reserve(trees.size());
  std::size_t dropped = 0;
  for (const Tree& tree : trees) {
    if (auto normalized = normalize_tree(tree, mapping, options))
      out.push_back(std::move(*normalized));
    else
      ++dropped;
  }
  if (skipped) *skipped = dropped;
  return out;
}

std::vector<TaggedSentence> tagged_corpus(const std::vector<Tree>& trees) {
  std::vector<TaggedSentence> sentences;
  sentences.reserve(trees.size());
  for (const Tree& tree : trees)
    sentences.push_back(extract_tagged_sentence(tree));
  return sentences;
}

}  // namespace treebench
