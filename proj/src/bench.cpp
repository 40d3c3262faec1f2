#include "treebench/bench.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "treebench/earley.hpp"
#include "treebench/hmm.hpp"

namespace treebench {

namespace fs = std::filesystem;

namespace {

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

std::string spec_slug(const PruneSpec& spec) {
  std::string slug = "n" + std::to_string(spec.min_count) + "_p" +
                     format_prob(spec.min_prob);
  if (spec.renormalize) slug += "_r";
  return slug;
}

std::string spec_name(const PruneSpec& spec) {
  std::string name = "N=" + std::to_string(spec.min_count) +
                     ",P=" + format_prob(spec.min_prob);
  if (spec.renormalize) name += ",renorm";
  return name;
}

CorpusRange parse_range(const std::string& text, CorpusRange::Unit unit) {
  CorpusRange range;
  range.unit = unit;
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("range must look like FIRST:LAST, got '" + text + "'");
  std::string first = text.substr(0, colon);
  std::string last = text.substr(colon + 1);
  try {
    if (!first.empty()) range.first = std::stoull(first);
    if (!last.empty()) range.last = std::stoull(last);
  } catch (const std::exception&) {
    throw ConfigError("bad range '" + text + "'");
  }
  return range;
}

std::string range_to_string(const CorpusRange& range) {
  std::string out = std::to_string(range.first) + ":";
  if (range.last != 0) out += std::to_string(range.last);
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + value +
                    "'");
}

}  // namespace

std::vector<PruneSpec> parse_grid(const std::string& text) {
  std::vector<PruneSpec> grid;
  std::istringstream in(text);
  std::string entry;
  while (std::getline(in, entry, ',')) {
    if (entry.empty()) continue;
    PruneSpec spec;
    std::istringstream fields(entry);
    std::string count_text, prob_text, flag;
    if (!std::getline(fields, count_text, ':') ||
        !std::getline(fields, prob_text, ':'))
      throw ConfigError("grid entry must look like N:P, got '" + entry + "'");
    if (std::getline(fields, flag, ':')) {
      if (flag != "r")
        throw ConfigError("grid entry flag must be 'r', got '" + entry + "'");
      spec.renormalize = true;
    }
    try {
      spec.min_count = std::stoll(count_text);
      spec.min_prob = std::stod(prob_text);
    } catch (const std::exception&) {
      throw ConfigError("bad grid entry '" + entry + "'");
    }
    grid.push_back(spec);
  }
  if (grid.empty()) throw ConfigError("empty prune grid");
  return grid;
}

void RunConfig::validate() const {
  if (corpus_paths.empty()) throw ConfigError("no corpus paths configured");
  if (root.empty()) throw ConfigError("root symbol must be nonempty");
  if (timeout_ms < 0) throw ConfigError("timeout_ms must be >= 0");
  if (grid.empty()) throw ConfigError("prune grid must be nonempty");
  for (const PruneSpec& spec : grid) {
    if (spec.min_count < 0)
      throw ConfigError("min_count must be >= 0");
    if (spec.min_prob < 0.0 || spec.min_prob > 1.0)
      throw ConfigError("min_prob must be within [0,1]");
  }
  auto check = [](const std::optional<CorpusRange>& range,
                  const std::string& name) {
    if (!range) return;
    if (range->first == 0)
      throw ConfigError(name + " is 1-based; first must be >= 1");
    if (range->last != 0 && range->last < range->first)
      throw ConfigError("empty " + name + ": " + range_to_string(*range));
  };
  check(train_range, "train_range");
  check(test_range, "test_range");
  if (train_range && test_range && !self_test &&
      train_range->unit == test_range->unit) {
    const auto last = [](const CorpusRange& r) {
      return r.last == 0 ? std::size_t(-1) : r.last;
    };
    if (train_range->first <= last(*test_range) &&
        test_range->first <= last(*train_range))
      throw ConfigError(
          "train and test ranges overlap; pass self_test=true to allow");
  }
  if (!train_range && test_range && !self_test)
    throw ConfigError(
        "train range covers the whole corpus and overlaps the test range; "
        "pass self_test=true to allow");
}

void RunConfig::apply_kv(const std::string& key, const std::string& value) {
  if (key == "corpus") {
    std::istringstream in(value);
    std::string path;
    while (std::getline(in, path, ','))
      if (!path.empty()) corpus_paths.push_back(path);
  } else if (key == "pos_map") {
    pos_map_path = value;
  } else if (key == "compress") {
    compress = parse_bool(value, key);
  } else if (key == "train_range") {
    train_range = parse_range(value, train_range ? train_range->unit
                                                 : CorpusRange::Unit::lines);
  } else if (key == "test_range") {
    test_range = parse_range(value, test_range ? test_range->unit
                                               : CorpusRange::Unit::lines);
  } else if (key == "range_unit") {
    CorpusRange::Unit unit;
    if (value == "lines")
      unit = CorpusRange::Unit::lines;
    else if (value == "sentences")
      unit = CorpusRange::Unit::sentences;
    else
      throw ConfigError("range_unit must be 'lines' or 'sentences'");
    if (train_range) train_range->unit = unit;
    if (test_range) test_range->unit = unit;
  } else if (key == "self_test") {
    self_test = parse_bool(value, key);
  } else if (key == "grid") {
    grid = parse_grid(value);
  } else if (key == "root") {
    root = value;
  } else if (key == "timeout_ms") {
    timeout_ms = std::stoll(value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "seed") {
    seed = std::stoull(value);
  } else if (key == "parallel") {
    parallel_sentences = parse_bool(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    // trim
    auto begin = line.find_first_not_of(" \t\r");
    auto end = line.find_last_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    line = line.substr(begin, end - begin + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    try {
      config.apply_kv(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& error) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                        error.what());
    }
  }
  return config;
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "compress=" << compress << '\n';
  out << "corpus=";
  for (std::size_t i = 0; i < corpus_paths.size(); ++i)
    out << (i ? "," : "") << corpus_paths[i];
  out << '\n';
  out << "grid=";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << (i ? "," : "") << grid[i].min_count << ':'
        << format_prob(grid[i].min_prob);
    if (grid[i].renormalize) out << ":r";
  }
  out << '\n';
  out << "parallel=" << parallel_sentences << '\n';
  out << "pos_map=" << pos_map_path << '\n';
  out << "root=" << root << '\n';
  out << "seed=" << seed << '\n';
  out << "self_test=" << self_test << '\n';
  auto unit_name = [](const CorpusRange& r) {
    return r.unit == CorpusRange::Unit::lines ? "lines" : "sentences";
  };
  out << "test_range="
      << (test_range ? range_to_string(*test_range) + "/" +
                           unit_name(*test_range)
                     : "")
      << '\n';
  out << "timeout_ms=" << timeout_ms << '\n';
  out << "train_range="
      << (train_range ? range_to_string(*train_range) + "/" +
                            unit_name(*train_range)
                      : "")
      << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

double RunLog::time_section(const std::string& label,
                            const std::function<void()>& work) {
  const auto begin = std::chrono::steady_clock::now();
  work();
  const auto end = std::chrono::steady_clock::now();
  const double seconds =
      std::chrono::duration_cast<std::chrono::milliseconds>(end - begin)
          .count() /
      1000.0;
  sections_.push_back({label, seconds});
  return seconds;
}

void RunLog::write(std::ostream& out) const {
  char buf[256];
  for (const SectionTiming& section : sections_) {
    std::snprintf(buf, sizeof(buf), "%-24s %10.3fs\n", section.label.c_str(),
                  section.seconds);
    out << buf;
  }
}

BenchResult run_bench(const Grammar& grammar, const Tagger& tagger,
                      const std::vector<BenchSentence>& sentences,
                      const std::string& root, std::int64_t timeout_ms,
                      bool parallel) {
  EarleyParser parser(grammar);
  EarleyParser::Options options;
  options.root = root;
  options.timeout_ms = timeout_ms;

  BenchResult result;
  result.predictions.resize(sentences.size());
  std::vector<std::uint64_t> insertions(sentences.size(), 0);
  std::vector<char> timed_out(sentences.size(), 0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::vector<std::string> tags = tagger.tag(sentences[i].words);
      try {
        EarleyParser::Outcome outcome = parser.parse(tags, options);
        insertions[i] = outcome.predictor_insertions;
        timed_out[i] = outcome.timed_out ? 1 : 0;
        if (outcome.tree) result.predictions[i] = std::move(*outcome.tree);
      } catch (const UnknownSymbolError&) {
        // a tag the pruned grammar no longer knows cannot be parsed
      }
    }
  };

  const auto begin_time = std::chrono::steady_clock::now();
  const unsigned hw = std::thread::hardware_concurrency();
  if (parallel && hw > 1 && sentences.size() > 1) {
    const std::size_t workers =
        std::min<std::size_t>(hw, sentences.size());
    std::vector<std::thread> pool;
    const std::size_t chunk = (sentences.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(sentences.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (std::thread& t : pool) t.join();
  } else {
    work(0, sentences.size());
  }
  result.elapsed_seconds =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - begin_time)
          .count() /
      1000.0;

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    result.predictor_insertions += insertions[i];
    result.timeouts += timed_out[i] ? 1 : 0;
  }
  return result;
}

void run_pipeline(const RunConfig& config, std::ostream& log) {
  config.validate();
  const std::string hash = config.hash();
  const std::string header = "config=" + hash;
  auto out_path = [&](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };

  const PosMapping mapping = config.pos_map_path.empty()
                                 ? PosMapping::penn_default()
                                 : PosMapping::load_file(config.pos_map_path);
  const NormalizeOptions norm_options{config.compress};

  // Loading is deliberately untimed; timing starts at learning.
  const std::string corpus_text = read_corpus_text(config.corpus_paths);
  std::vector<Tree> train_raw = config.train_range
                                    ? trees_in_range(corpus_text,
                                                     *config.train_range)
                                    : parse_corpus(corpus_text);
  std::vector<Tree> test_raw =
      config.test_range ? trees_in_range(corpus_text, *config.test_range)
                        : train_raw;
  if (train_raw.empty()) throw ConfigError("train range selects no trees");
  if (test_raw.empty()) throw ConfigError("test range selects no trees");

  std::size_t train_skipped = 0, test_skipped = 0;
  const std::vector<Tree> train =
      normalize_corpus(train_raw, mapping, norm_options, &train_skipped);
  const std::vector<Tree> test =
      normalize_corpus(test_raw, mapping, norm_options, &test_skipped);
  if (train.empty()) throw ConfigError("train range is entirely degenerate");
  if (test.empty()) throw ConfigError("test range is entirely degenerate");

  fs::create_directories(config.out_dir);
  RunLog run_log;

  Grammar grammar;
  const double learn_seconds =
      run_log.time_section("learn", [&] { grammar = Grammar::learn(train); });
  grammar.save_file(out_path("grammar.tsv"), header);

  const std::vector<TaggedSentence> train_tagged = tagged_corpus(train);
  const GrammarStats stats = compute_stats(
      grammar, train_tagged, static_cast<std::int64_t>(learn_seconds * 1000));
  {
    std::ofstream stats_out(out_path("stats.txt"));
    stats_out << "# " << header << "\n";
    write_stats_kv(stats_out, stats);
    std::ofstream csv_out(out_path("stats.csv"));
    write_stats_csv(csv_out, stats, config.compress ? "compressed" : "full",
                    true);
  }

  HmmModel model;
  run_log.time_section("train-hmm", [&] { model = train_hmm(train_tagged); });
  model.save_file(out_path("model.hmm"), header);
  const Tagger tagger(model);

  std::vector<PruneResult> pruned;
  std::vector<PruneReport> prune_reports;
  run_log.time_section("prune", [&] {
    for (const PruneSpec& spec : config.grid) {
      pruned.push_back(prune(grammar, spec));
      prune_reports.push_back(pruned.back().report);
      pruned.back().grammar.save_file(
          out_path("grammar." + spec_slug(spec) + ".tsv"), header);
    }
  });
  {
    std::ofstream sweep_out(out_path("sweep.csv"));
    write_sweep_csv(sweep_out, prune_reports);
  }

  std::vector<BenchSentence> sentences;
  sentences.reserve(test.size());
  for (const Tree& gold : test) {
    BenchSentence sentence;
    sentence.gold = gold;
    for (const TaggedWord& item : extract_tagged_sentence(gold))
      sentence.words.push_back(item.word);
    sentences.push_back(std::move(sentence));
  }

  std::vector<ConfigReport> reports;
  for (std::size_t i = 0; i < pruned.size(); ++i) {
    const PruneSpec& spec = config.grid[i];
    BenchResult bench;
    run_log.time_section("bench " + spec_name(spec), [&] {
      bench = run_bench(pruned[i].grammar, tagger, sentences, config.root,
                        config.timeout_ms, config.parallel_sentences);
    });

    std::ofstream parses_out(out_path("parses." + spec_slug(spec) + ".txt"));
    parses_out << "# " << header << "\n";
    for (const auto& prediction : bench.predictions)
      parses_out << (prediction ? emit_parse_tree(*prediction) : "(NOPARSE)")
                 << '\n';

    ConfigReport entry;
    entry.name = spec_name(spec);
    entry.spec = spec;
    entry.pattern_types = pruned[i].report.pattern_types;
    entry.report = evaluate_run(test, bench.predictions,
                                std::max(bench.elapsed_seconds, 1e-3));
    reports.push_back(entry);

    std::ofstream report_out(out_path("report." + spec_slug(spec) + ".txt"));
    report_out << "# " << header << "\n";
    write_report_kv(report_out, reports.back().report);
    report_out << "timeouts=" << bench.timeouts << '\n'
               << "predictor_insertions=" << bench.predictor_insertions
               << '\n';
  }

  {
    std::ofstream csv_out(out_path("reports.csv"));
    write_reports_csv(csv_out, reports);
    const Ranking ranking = compare_configs(reports);
    std::ofstream rank_out(out_path("rankings.txt"));
    rank_out << "# " << header << "\n";
    rank_out << "by_pt=";
    for (std::size_t i = 0; i < ranking.by_pt.size(); ++i)
      rank_out << (i ? "," : "") << reports[ranking.by_pt[i]].name;
    rank_out << "\nby_rt=";
    for (std::size_t i = 0; i < ranking.by_rt.size(); ++i)
      rank_out << (i ? "," : "") << reports[ranking.by_rt[i]].name;
    rank_out << '\n';
  }

  {
    std::ofstream log_out(out_path("run.log"));
    const auto now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&now));
    log_out << "config=" << hash << "\ntimestamp=" << stamp << "\n"
            << "train_trees=" << train.size() << " (skipped "
            << train_skipped << " degenerate)\n"
            << "test_trees=" << test.size() << " (skipped " << test_skipped
            << " degenerate)\n";
    run_log.write(log_out);
  }

  log << "pipeline done: " << reports.size() << " configurations, outputs in "
      << config.out_dir << "\n";
  run_log.write(log);
}

}  // namespace treebench
