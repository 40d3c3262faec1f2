#include "treebench/pos_mapping.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace treebench {

PosMapping::PosMapping(std::map<std::string, std::string> entries)
    : entries_(std::move(entries)) {
  for (const auto& [original, compressed] : entries_) {
    if (original.empty() || compressed.empty())
      throw std::invalid_argument("POS mapping rows must be nonempty");
    if (entries_.count(compressed))
      throw std::invalid_argument("POS mapping target '" + compressed +
                                  "' is also a source; mapping would not be "
                                  "idempotent");
  }
}

const PosMapping& PosMapping::penn_default() {
  static const PosMapping mapping(std::map<std::string, std::string>{
      {"NNS", "NN"},  {"NNP", "NN"},  {"NNPS", "NN"}, {"FW", "NN"},
      {"VBD", "VB"},  {"VBN", "VB"},  {"VBG", "VB"},  {"VBP", "VB"},
      {"VBZ", "VB"},  {"PRP$", "PRP"}, {"WP", "WDT"}, {"WP$", "WDT"},
      {"WRB", "WDT"}, {"TO", "IN"},   {"JJR", "JJ"},  {"JJS", "JJ"},
      {"RBR", "RB"},  {"RBS", "RB"},
  });
  return mapping;
}

PosMapping PosMapping::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open POS mapping file: " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream row(line);
    std::string original, compressed, extra;
    if (!(row >> original)) continue;  // blank
    if (!(row >> compressed) || (row >> extra))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected ORIGINAL<TAB>COMPRESSED");
    entries[original] = compressed;
  }
  return PosMapping(std::move(entries));
}

const std::string& PosMapping::apply(const std::string& tag) const {
  auto it = entries_.find(tag);
  return it == entries_.end() ? tag : it->second;
}

}  // namespace treebench
