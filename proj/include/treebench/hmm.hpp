#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treebench/normalize.hpp"

namespace treebench {

// Virtual boundary tags participate in transitions but never in output.
inline constexpr const char* kStartTag = "<s>";
inline constexpr const char* kEndTag = "</s>";
// Emission row holding the per-tag reserved mass for unseen words.
inline constexpr const char* kUnknownWord = "<unk>";

// Bigram HMM. Transitions are add-one smoothed over the outcome alphabet
// (all tags plus the end tag), so each row sums to 1. Emissions are
// relative frequencies scaled by (1 - unk), where unk = 1/(count(tag) +
// |vocab|) is reserved for out-of-vocabulary words; a known word never
// receives an emission from a tag it was not seen with.
struct HmmModel {
  std::map<std::string, std::map<std::string, double>> transition;
  std::map<std::string, std::map<std::string, double>> emission;
  std::set<std::string> tag_set;  // real tags, boundaries excluded
  std::set<std::string> vocab;

  // Sections [TRANSITION] and [EMISSION], rows FROM<TAB>TO<TAB>PROB.
  void save(std::ostream& out, const std::string& header = "") const;
  void save_file(const std::string& path, const std::string& header = "") const;
  static HmmModel load(std::istream& in);
  static HmmModel load_file(const std::string& path);
};

// Throws std::invalid_argument on an empty corpus or empty sentence.
HmmModel train_hmm(const std::vector<TaggedSentence>& corpus);

// Decoder compiled from a model; reusable across sentences and threads.
class Tagger {
 public:
  explicit Tagger(const HmmModel& model);

  // Max-probability tag sequence in log space; ties broken toward the
  // lexicographically smaller tag. Output length equals input length.
  std::vector<std::string> tag(const std::vector<std::string>& words) const;

  // Log score the model assigns to a (words, tags) path, boundaries
  // included. -inf when the path is impossible.
  double path_score(const std::vector<std::string>& words,
                    const std::vector<std::string>& tags) const;

  const std::vector<std::string>& tags() const { return tag_names_; }

 private:
  int tag_id(const std::string& tag) const;
  double emission_log(int tag, const std::string& word) const;

  std::vector<std::string> tag_names_;  // sorted; decides tie order
  std::map<std::string, int> tag_ids_;
  std::vector<double> trans_log_;  // (T+1) x (T+1); row T = start, col T = end
  std::map<std::string, std::vector<std::pair<int, double>>> word_tags_;
  std::vector<double> unknown_log_;
};

}  // namespace treebench
