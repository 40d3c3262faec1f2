#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "treebench/corpus.hpp"
#include "treebench/eval.hpp"
#include "treebench/hmm.hpp"
#include "treebench/prune.hpp"

namespace treebench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> corpus_paths;
  std::string pos_map_path;  // empty = built-in table
  bool compress = true;
  std::optional<CorpusRange> train_range;
  std::optional<CorpusRange> test_range;
  bool self_test = false;  // allows overlapping / identical ranges
  std::vector<PruneSpec> grid;
  std::string root = "S";
  std::int64_t timeout_ms = 10'000;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool parallel_sentences = false;

  // Throws ConfigError; checks ranges, grid and paths for shape only.
  void validate() const;

  // Flat key=value file, '#' comments. Unknown keys are errors.
  static RunConfig from_file(const std::string& path);
  void apply_kv(const std::string& key, const std::string& value);

  // FNV-1a over the canonical key=value dump; stable across runs.
  std::string hash() const;
  std::string canonical() const;
};

// "N:P" pairs separated by commas, e.g. "50:0,60:0,0:0.05,10:0.02".
std::vector<PruneSpec> parse_grid(const std::string& text);

struct SectionTiming {
  std::string label;
  double seconds = 0.0;
};

class RunLog {
 public:
  // Monotonic wall time of work(), millisecond resolution, recorded
  // under the label.
  double time_section(const std::string& label,
                      const std::function<void()>& work);
  const std::vector<SectionTiming>& sections() const { return sections_; }
  void write(std::ostream& out) const;

 private:
  std::vector<SectionTiming> sections_;
};

struct BenchSentence {
  Tree gold;  // normalized gold tree
  std::vector<std::string> words;
};

// Tags then parses every sentence under one grammar; fills predictions
// (absent = no parse / timeout / unknown tag) and measures the tag+parse
// wall time. A timed-out sentence consumes its full budget.
struct BenchResult {
  std::vector<std::optional<ParseTree>> predictions;
  double elapsed_seconds = 0.0;
  std::uint64_t predictor_insertions = 0;
  std::size_t timeouts = 0;
};
BenchResult run_bench(const Grammar& grammar, const Tagger& tagger,
                      const std::vector<BenchSentence>& sentences,
                      const std::string& root, std::int64_t timeout_ms,
                      bool parallel);

// learn -> prune grid -> tag -> parse -> evaluate, writing grammar files,
// the tagger model, parse files, sweep and report CSVs under out_dir.
void run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace treebench
