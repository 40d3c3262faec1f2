#pragma once

#include <map>
#include <string>

namespace treebench {

// Many-to-one POS tag mapping used to shrink the terminal inventory
// (e.g. NNS/NNP/NNPS/FW -> NN). One application reaches a fixed point:
// no target tag may itself be a key.
class PosMapping {
 public:
  PosMapping() = default;
  explicit PosMapping(std::map<std::string, std::string> entries);

  // The built-in Penn Treebank compression table (18 rows).
  static const PosMapping& penn_default();

  // Two-column plain text file: ORIGINAL<TAB>COMPRESSED, '#' comments.
  static PosMapping load_file(const std::string& path);

  // Mapped tag if present, otherwise the tag unchanged.
  const std::string& apply(const std::string& tag) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace treebench
