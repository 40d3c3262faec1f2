#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "treebench/earley.hpp"
#include "treebench/prune.hpp"
#include "treebench/tree.hpp"

namespace treebench {

struct BracketCounts {
  std::int64_t matched = 0;           // C+ (precision numerator)
  std::int64_t matched_recalled = 0;  // C+_r (recall numerator)
  std::int64_t predicted_total = 0;
  std::int64_t gold_total = 0;

  BracketCounts& operator+=(const BracketCounts& other);
};

// Labeled bracket match: constituents are (label, start, end) triples over
// internal nodes (root included, single-token spans included; leaves are
// not constituents). matched is the multiset intersection size. An absent
// prediction contributes 0 matched, 0 predicted and the full gold count.
BracketCounts bracket_score(const Tree& gold, const ParseTree* predicted);

struct EvalReport {
  BracketCounts counts;
  double elapsed_seconds = 0.0;
  double precision_pct = 0.0;  // 100 * matched / predicted_total
  double recall_pct = 0.0;     // 100 * matched_recalled / gold_total
  double pt = 0.0;             // precision_pct / elapsed_seconds
  double rt = 0.0;             // recall_pct / elapsed_seconds
  double mu = 0.0;             // matched / elapsed_seconds
  double lambda = 0.0;         // matched_recalled / elapsed_seconds
  bool zero_predicted = false; // precision forced to 0 (nothing predicted)
};

// Micro-average over the corpus; lists must be parallel.
EvalReport evaluate_run(const std::vector<Tree>& golds,
                        const std::vector<std::optional<ParseTree>>& predictions,
                        double elapsed_seconds);

EvalReport report_from_counts(const BracketCounts& counts,
                              double elapsed_seconds);

struct ConfigReport {
  std::string name;
  PruneSpec spec;
  std::size_t pattern_types = 0;
  EvalReport report;
};

struct Ranking {
  std::vector<std::size_t> by_pt;  // indexes into the input, best first
  std::vector<std::size_t> by_rt;
};

// Ties broken by higher precision (resp. recall), then input order.
Ranking compare_configs(const std::vector<ConfigReport>& reports);

void write_report_kv(std::ostream& out, const EvalReport& report);
// Columns: min_count,min_prob,pattern_types,precision_pct,recall_pct,
// elapsed_s,pt,rt
void write_reports_csv(std::ostream& out,
                       const std::vector<ConfigReport>& reports);

}  // namespace treebench
