#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "treebench/grammar.hpp"

namespace treebench {

// Makes boundary cases (probability exactly at the threshold) survive
// deterministically across platforms.
inline constexpr double kProbEpsilon = 1e-12;

struct PruneSpec {
  std::int64_t min_count = 0;  // 0 disables; a rule survives iff count >= N
  double min_prob = 0.0;       // 0 disables; survives iff prob >= P
  bool renormalize = false;    // re-divide probabilities over survivors

  bool operator==(const PruneSpec&) const = default;
};

struct PruneReport {
  PruneSpec spec;
  std::int64_t pattern_occurrences = 0;  // PA: counts of surviving rules
  std::size_t pattern_types = 0;         // PT: number of surviving rules
  std::size_t nonterminal_types = 0;     // NT: lhs types among survivors
};

struct PruneResult {
  Grammar grammar;
  PruneReport report;
};

// Survival tests use the probabilities as learned (pre-prune); surviving
// probabilities are re-derived only when spec.renormalize is set.
PruneResult prune(const Grammar& grammar, const PruneSpec& spec);

std::vector<PruneReport> sweep(const Grammar& grammar,
                               const std::vector<PruneSpec>& specs);

// Columns: min_count,min_prob,pa,pt,nt
void write_sweep_csv(std::ostream& out, const std::vector<PruneReport>& rows);

}  // namespace treebench
