#include "treebench/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace treebench {

BracketCounts& BracketCounts::operator+=(const BracketCounts& other) {
  matched += other.matched;
  matched_recalled += other.matched_recalled;
  predicted_total += other.predicted_total;
  gold_total += other.gold_total;
  return *this;
}

namespace {

using ConstituentKey = std::tuple<std::string, int, int>;
using ConstituentBag = std::map<ConstituentKey, std::int64_t>;

int collect_constituents(const Tree& node, int start, ConstituentBag& bag) {
  if (node.is_leaf()) return start + 1;
  int end = start;
  for (const Tree& child : node.children)
    end = collect_constituents(child, end, bag);
  ++bag[{node.label, start, end}];
  return end;
}

int collect_constituents(const ParseTree& node, int start,
                         ConstituentBag& bag) {
  if (node.is_leaf()) return start + 1;
  int end = start;
  for (const ParseTree& child : node.children)
    end = collect_constituents(child, end, bag);
  ++bag[{node.label, start, end}];
  return end;
}

std::int64_t bag_size(const ConstituentBag& bag) {
  std::int64_t total = 0;
  for (const auto& [key, count] : bag) total += count;
  return total;
}

std::int64_t bag_intersection(const ConstituentBag& a,
                              const ConstituentBag& b) {
  std::int64_t total = 0;
  for (const auto& [key, count] : a) {
    auto it = b.find(key);
    if (it != b.end()) total += std::min(count, it->second);
  }
  return total;
}

}  // namespace

BracketCounts bracket_score(const Tree& gold, const ParseTree* predicted) {
  ConstituentBag gold_bag;
  collect_constituents(gold, 0, gold_bag);

  BracketCounts counts;
  counts.gold_total = bag_size(gold_bag);
  if (predicted == nullptr) return counts;

  ConstituentBag predicted_bag;
  collect_constituents(*predicted, 0, predicted_bag);
  counts.predicted_total = bag_size(predicted_bag);
  counts.matched = bag_intersection(predicted_bag, gold_bag);
  counts.matched_recalled = counts.matched;
  return counts;
}

EvalReport report_from_counts(const BracketCounts& counts,
                              double elapsed_seconds) {
  if (elapsed_seconds <= 0.0)
    throw std::invalid_argument("elapsed_seconds must be positive");
  EvalReport report;
  report.counts = counts;
  report.elapsed_seconds = elapsed_seconds;
  if (counts.predicted_total > 0) {
    report.precision_pct = 100.0 * static_cast<double>(counts.matched) /
                           static_cast<double>(counts.predicted_total);
  } else {
    report.zero_predicted = true;  // precision defined as 0
  }
  if (counts.gold_total > 0)
    report.recall_pct = 100.0 * static_cast<double>(counts.matched_recalled) /
                        static_cast<double>(counts.gold_total);
  report.pt = report.precision_pct / elapsed_seconds;
  report.rt = report.recall_pct / elapsed_seconds;
  report.mu = static_cast<double>(counts.matched) / elapsed_seconds;
  report.lambda =
      static_cast<double>(counts.matched_recalled) / elapsed_seconds;
  return report;
}

EvalReport evaluate_run(
    const std::vector<Tree>& golds,
    const std::vector<std::optional<ParseTree>>& predictions,
    double elapsed_seconds) {
  if (golds.size() != predictions.size())
    throw std::invalid_argument("gold and prediction lists must be parallel");
  BracketCounts total;
  for (std::size_t i = 0; i < golds.size(); ++i)
    total += bracket_score(golds[i],
                           predictions[i] ? &*predictions[i] : nullptr);
  return report_from_counts(total, elapsed_seconds);
}

Ranking compare_configs(const std::vector<ConfigReport>& reports) {
  Ranking ranking;
  ranking.by_pt.resize(reports.size());
  ranking.by_rt.resize(reports.size());
  std::iota(ranking.by_pt.begin(), ranking.by_pt.end(), 0);
  std::iota(ranking.by_rt.begin(), ranking.by_rt.end(), 0);
  std::stable_sort(ranking.by_pt.begin(), ranking.by_pt.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (reports[a].report.pt != reports[b].report.pt)
                       return reports[a].report.pt > reports[b].report.pt;
                     return reports[a].report.precision_pct >
                            reports[b].report.precision_pct;
                   });
  std::stable_sort(ranking.by_rt.begin(), ranking.by_rt.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (reports[a].report.rt != reports[b].report.rt)
                       return reports[a].report.rt > reports[b].report.rt;
                     return reports[a].report.recall_pct >
                            reports[b].report.recall_pct;
                   });
  return ranking;
}

void write_report_kv(std::ostream& out, const EvalReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "matched=%lld\nmatched_recalled=%lld\npredicted_total=%lld\n"
                "gold_total=%lld\nelapsed_seconds=%.3f\nprecision_pct=%.6g\n"
                "recall_pct=%.6g\npt=%.6g\nrt=%.6g\nmu=%.6g\nlambda=%.6g\n"
                "zero_predicted=%d\n",
                static_cast<long long>(report.counts.matched),
                static_cast<long long>(report.counts.matched_recalled),
                static_cast<long long>(report.counts.predicted_total),
                static_cast<long long>(report.counts.gold_total),
                report.elapsed_seconds, report.precision_pct,
                report.recall_pct, report.pt, report.rt, report.mu,
                report.lambda, report.zero_predicted ? 1 : 0);
  out << buf;
}

void write_reports_csv(std::ostream& out,
                       const std::vector<ConfigReport>& reports) {
  out << "min_count,min_prob,pattern_types,precision_pct,recall_pct,"
         "elapsed_s,pt,rt\n";
  char buf[256];
  for (const ConfigReport& entry : reports) {
    std::snprintf(buf, sizeof(buf), "%lld,%g,%zu,%.6g,%.6g,%.3f,%.6g,%.6g\n",
                  static_cast<long long>(entry.spec.min_count),
                  entry.spec.min_prob, entry.pattern_types,
                  entry.report.precision_pct, entry.report.recall_pct,
                  entry.report.elapsed_seconds, entry.report.pt,
                  entry.report.rt);
    out << buf;
  }
}

}  // namespace treebench
