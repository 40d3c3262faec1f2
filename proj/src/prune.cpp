#include "treebench/prune.hpp"

#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace treebench {

PruneResult prune(const Grammar& grammar, const PruneSpec& spec) {
  Grammar::RuleMap survivors;
  for (const auto& [production, info] : grammar.rules()) {
    if (info.count < spec.min_count) continue;
    if (info.prob < spec.min_prob - kProbEpsilon) continue;
    survivors.emplace(production, info);
  }

  if (spec.renormalize) {
    std::map<std::string, std::int64_t> totals;
    for (const auto& [production, info] : survivors)
      totals[production.lhs] += info.count;
    for (auto& [production, info] : survivors)
      info.prob = static_cast<double>(info.count) /
                  static_cast<double>(totals[production.lhs]);
  }

  PruneResult result;
  result.grammar = Grammar::from_rules(std::move(survivors));
  result.report.spec = spec;
  result.report.pattern_occurrences = result.grammar.occurrence_total();
  result.report.pattern_types = result.grammar.rule_count();
  result.report.nonterminal_types = result.grammar.nonterminals().size();
  return result;
}

std::vector<PruneReport> sweep(const Grammar& grammar,
                               const std::vector<PruneSpec>& specs) {
  std::vector<PruneReport> reports;
  reports.reserve(specs.size());
  for (const PruneSpec& spec : specs)
    reports.push_back(prune(grammar, spec).report);
  return reports;
}

void write_sweep_csv(std::ostream& out, const std::vector<PruneReport>& rows) {
  out << "min_count,min_prob,pa,pt,nt\n";
  char prob[32];
  for (const PruneReport& row : rows) {
    std::snprintf(prob, sizeof(prob), "%g", row.spec.min_prob);
    out << row.spec.min_count << ',' << prob << ',' << row.pattern_occurrences
        << ',' << row.pattern_types << ',' << row.nonterminal_types << '\n';
  }
}

}  // namespace treebench
