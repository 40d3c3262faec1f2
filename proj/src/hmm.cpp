#include "treebench/hmm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace treebench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

HmmModel train_hmm(const std::vector<TaggedSentence>& corpus) {
  if (corpus.empty())
    throw std::invalid_argument("cannot train a tagger on an empty corpus");

  std::map<std::string, std::map<std::string, std::int64_t>> trans_counts;
  std::map<std::string, std::map<std::string, std::int64_t>> emit_counts;
  std::map<std::string, std::int64_t> tag_counts;
  HmmModel model;

  for (const TaggedSentence& sentence : corpus) {
    if (sentence.empty())
      throw std::invalid_argument("tagged sentences must be nonempty");
    std::string prev = kStartTag;
    for (const TaggedWord& item : sentence) {
      if (item.word.empty() || item.tag.empty())
        throw std::invalid_argument("words and tags must be nonempty");
      if (item.tag == kStartTag || item.tag == kEndTag ||
          item.word == kUnknownWord)
        throw std::invalid_argument("reserved symbol in training data: " +
                                    item.word + "/" + item.tag);
      ++trans_counts[prev][item.tag];
      ++emit_counts[item.tag][item.word];
      ++tag_counts[item.tag];
      model.vocab.insert(item.word);
      prev = item.tag;
    }
    ++trans_counts[prev][kEndTag];
  }

  for (const auto& [tag, ignored] : tag_counts) model.tag_set.insert(tag);

  // Add-one transitions over the outcome alphabet (tags + end tag).
  const double outcomes = static_cast<double>(model.tag_set.size()) + 1.0;
  std::vector<std::string> from_tags(model.tag_set.begin(),
                                     model.tag_set.end());
  from_tags.push_back(kStartTag);
  for (const std::string& from : from_tags) {
    double row_total = 0.0;
    for (const auto& [to, count] : trans_counts[from]) row_total += count;
    auto& row = model.transition[from];
    for (const std::string& to : model.tag_set)
      row[to] = (trans_counts[from][to] + 1.0) / (row_total + outcomes);
    row[kEndTag] = (trans_counts[from][kEndTag] + 1.0) / (row_total + outcomes);
  }

  // Seen pairs keep their relative frequencies, scaled down by the mass
  // reserved for out-of-vocabulary words.
  const double vocab_size = static_cast<double>(model.vocab.size());
  for (const auto& [tag, words] : emit_counts) {
    const double tag_total = static_cast<double>(tag_counts[tag]);
    const double unknown = 1.0 / (tag_total + vocab_size);
    auto& row = model.emission[tag];
    for (const auto& [word, count] : words)
      row[word] = count / tag_total * (1.0 - unknown);
    row[kUnknownWord] = unknown;
  }
  return model;
}

void HmmModel::save(std::ostream& out, const std::string& header) const {
  if (!header.empty()) out << "# " << header << "\n";
  out << "[TRANSITION]\n";
  for (const auto& [from, row] : transition)
    for (const auto& [to, prob] : row)
      out << from << '\t' << to << '\t' << format_double(prob) << '\n';
  out << "[EMISSION]\n";
  for (const auto& [tag, row] : emission)
    for (const auto& [word, prob] : row)
      out << tag << '\t' << word << '\t' << format_double(prob) << '\n';
}

void HmmModel::save_file(const std::string& path,
                         const std::string& header) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  save(out, header);
}

HmmModel HmmModel::load(std::istream& in) {
  HmmModel model;
  enum class Section { none, transition, emission } section = Section::none;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line == "[TRANSITION]") {
      section = Section::transition;
      continue;
    }
    if (line == "[EMISSION]") {
      section = Section::emission;
      continue;
    }
    std::istringstream row(line);
    std::string from, to, prob_text;
    if (!std::getline(row, from, '\t') || !std::getline(row, to, '\t') ||
        !std::getline(row, prob_text) || section == Section::none)
      throw std::runtime_error("model line " + std::to_string(line_no) +
                               ": expected FROM\\tTO\\tPROB inside a section");
    double prob = std::stod(prob_text);
    if (section == Section::transition) {
      model.transition[from][to] = prob;
    } else {
      model.emission[from][to] = prob;
      model.tag_set.insert(from);
      if (to != kUnknownWord) model.vocab.insert(to);
    }
  }
  if (model.tag_set.empty())
    throw std::runtime_error("model file has no emissions");
  return model;
}

HmmModel HmmModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return load(in);
}

Tagger::Tagger(const HmmModel& model)
    : tag_names_(model.tag_set.begin(), model.tag_set.end()) {
  const int n = static_cast<int>(tag_names_.size());
  for (int i = 0; i < n; ++i) tag_ids_[tag_names_[i]] = i;

  // Row/col n holds the start/end boundary.
  trans_log_.assign(static_cast<std::size_t>(n + 1) * (n + 1), kNegInf);
  auto log_of = [](double p) { return p > 0.0 ? std::log(p) : kNegInf; };
  for (const auto& [from, row] : model.transition) {
    int from_id = from == kStartTag ? n : tag_id(from);
    if (from_id < 0) continue;
    for (const auto& [to, prob] : row) {
      int to_id = to == kEndTag ? n : tag_id(to);
      if (to_id < 0) continue;
      trans_log_[static_cast<std::size_t>(from_id) * (n + 1) + to_id] =
          log_of(prob);
    }
  }

  unknown_log_.assign(n, kNegInf);
  for (const auto& [tag, row] : model.emission) {
    int id = tag_id(tag);
    if (id < 0) continue;
    for (const auto& [word, prob] : row) {
      if (word == kUnknownWord)
        unknown_log_[id] = log_of(prob);
      else
        word_tags_[word].push_back({id, log_of(prob)});
    }
  }
}

int Tagger::tag_id(const std::string& tag) const {
  auto it = tag_ids_.find(tag);
  return it == tag_ids_.end() ? -1 : it->second;
}

double Tagger::emission_log(int tag, const std::string& word) const {
  auto it = word_tags_.find(word);
  if (it == word_tags_.end()) return unknown_log_[tag];
  for (const auto& [id, lp] : it->second)
    if (id == tag) return lp;
  return kNegInf;  // known word, unseen pair
}

std::vector<std::string> Tagger::tag(
    const std::vector<std::string>& words) const {
  if (words.empty())
    throw std::invalid_argument("cannot tag an empty sentence");
  const int n = static_cast<int>(tag_names_.size());
  const int boundary = n;
  const std::size_t len = words.size();
  auto trans = [&](int a, int b) {
    return trans_log_[static_cast<std::size_t>(a) * (n + 1) + b];
  };

  std::vector<double> scores(static_cast<std::size_t>(len) * n, kNegInf);
  std::vector<int> back(static_cast<std::size_t>(len) * n, -1);

  for (int t = 0; t < n; ++t)
    scores[t] = trans(boundary, t) + emission_log(t, words[0]);
  for (std::size_t i = 1; i < len; ++i) {
    for (int t = 0; t < n; ++t) {
      const double e = emission_log(t, words[i]);
      if (e == kNegInf) continue;
      double best = kNegInf;
      int arg = -1;
      for (int p = 0; p < n; ++p) {
        const double prev = scores[(i - 1) * n + p];
        if (prev == kNegInf) continue;
        // strict improvement keeps the lexicographically smallest tag
        const double v = prev + trans(p, t);
        if (v > best) {
          best = v;
          arg = p;
        }
      }
      if (arg >= 0) {
        scores[i * n + t] = best + e;
        back[i * n + t] = arg;
      }
    }
  }

  double best = kNegInf;
  int last = -1;
  for (int t = 0; t < n; ++t) {
    const double score = scores[(len - 1) * n + t];
    if (score == kNegInf) continue;
    const double v = score + trans(t, boundary);
    if (v > best) {
      best = v;
      last = t;
    }
  }
  if (last < 0)
    throw std::runtime_error("no tag path for sentence (corrupt model?)");

  std::vector<std::string> tags(len);
  for (std::size_t i = len; i-- > 0;) {
    tags[i] = tag_names_[last];
    last = back[i * n + last];
  }
  return tags;
}

double Tagger::path_score(const std::vector<std::string>& words,
                          const std::vector<std::string>& tags) const {
  if (words.size() != tags.size() || words.empty())
    throw std::invalid_argument("words/tags must be parallel and nonempty");
  const int n = static_cast<int>(tag_names_.size());
  auto trans = [&](int a, int b) {
    return trans_log_[static_cast<std::size_t>(a) * (n + 1) + b];
  };
  double total = 0.0;
  int prev = n;
  for (std::size_t i = 0; i < words.size(); ++i) {
    int t = tag_id(tags[i]);
    if (t < 0) return kNegInf;
    total += trans(prev, t) + emission_log(t, words[i]);
    prev = t;
  }
  return total + trans(prev, n);
}

}  // namespace treebench
