#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "treebench/hmm.hpp"

using namespace treebench;

namespace {

std::vector<std::string> all_sequences_best(
    const Tagger& tagger, const std::vector<std::string>& words,
    const std::vector<std::string>& tags, double* best_score) {
  // exhaustive search over tag sequences, scored through the model
  std::vector<std::string> best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<std::string> current(words.size());
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == words.size()) {
      const double score = tagger.path_score(words, current);
      if (score > best_value) {
        best_value = score;
        best = current;
      }
      return;
    }
    for (const std::string& tag : tags) {
      current[i] = tag;
      go(i + 1);
    }
  };
  go(0);
  *best_score = best_value;
  return best;
}

}  // namespace

TEST_CASE("single observation dominates transitions and emissions") {
  HmmModel model = train_hmm({{{"the", "DT"}, {"dog", "NN"}}});
  const auto& from_dt = model.transition.at("DT");
  for (const auto& [to, prob] : from_dt)
    CHECK(from_dt.at("NN") >= prob);
  const auto& emit_dt = model.emission.at("DT");
  for (const auto& [word, prob] : emit_dt)
    CHECK(emit_dt.at("the") >= prob);
}

TEST_CASE("more frequent transitions get higher probability") {
  HmmModel model = train_hmm({
      {{"the", "DT"}, {"dog", "NN"}},
      {{"the", "DT"}, {"cat", "NN"}},
      {{"the", "DT"}, {"big", "JJ"}},
  });
  CHECK(model.transition.at("DT").at("NN") >
        model.transition.at("DT").at("JJ"));
}

TEST_CASE("transition rows are proper distributions") {
  HmmModel model = train_hmm({
      {{"the", "DT"}, {"dog", "NN"}, {"runs", "VB"}},
      {{"a", "DT"}, {"cat", "NN"}},
  });
  for (const auto& [from, row] : model.transition) {
    double sum = 0.0;
    for (const auto& [to, prob] : row) sum += prob;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  for (const auto& [tag, row] : model.emission) {
    double sum = 0.0;
    for (const auto& [word, prob] : row) sum += prob;
    CHECK(sum <= 1.0 + 1e-9);
  }
}

TEST_CASE("empty training input is an error") {
  CHECK_THROWS_AS(train_hmm({}), std::invalid_argument);
  CHECK_THROWS_AS(train_hmm({TaggedSentence{}}), std::invalid_argument);
}

TEST_CASE("viterbi recovers the only consistent path") {
  HmmModel model = train_hmm({{{"the", "DT"}, {"dog", "NN"}}});
  Tagger tagger(model);
  CHECK(tagger.tag({"the", "dog"}) ==
        std::vector<std::string>{"DT", "NN"});
  CHECK(tagger.tag({"the"}) == std::vector<std::string>{"DT"});
  CHECK(tagger.tag({"dog"}) == std::vector<std::string>{"NN"});
}

TEST_CASE("output length equals input length, unknown words included") {
  HmmModel model = train_hmm({
      {{"the", "DT"}, {"dog", "NN"}, {"runs", "VB"}},
      {{"a", "DT"}, {"cat", "NN"}, {"sleeps", "VB"}},
  });
  Tagger tagger(model);
  auto tags = tagger.tag({"the", "wug", "runs"});
  REQUIRE(tags.size() == 3);
  CHECK(tags[0] == "DT");
  CHECK(tags[2] == "VB");
  // identical inputs give identical outputs
  CHECK(tagger.tag({"the", "wug", "runs"}) == tags);
}

TEST_CASE("viterbi matches exhaustive enumeration on random instances") {
  std::mt19937 rng(20240811);
  const std::vector<std::string> tag_pool = {"T1", "T2", "T3", "T4", "T5"};
  const std::vector<std::string> word_pool = {"w1", "w2", "w3",
                                              "w4", "w5", "w6"};
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_tags(2, 5);
    std::uniform_int_distribution<int> n_sents(2, 6);
    std::uniform_int_distribution<int> sent_len(1, 6);
    const int tag_count = n_tags(rng);
    std::vector<TaggedSentence> corpus;
    for (int s = n_sents(rng); s > 0; --s) {
      TaggedSentence sentence;
      for (int w = sent_len(rng); w > 0; --w) {
        sentence.push_back(
            {word_pool[std::uniform_int_distribution<int>(0, 5)(rng)],
             tag_pool[std::uniform_int_distribution<int>(
                 0, tag_count - 1)(rng)]});
      }
      corpus.push_back(std::move(sentence));
    }
    HmmModel model = train_hmm(corpus);
    Tagger tagger(model);
    std::vector<std::string> tags(model.tag_set.begin(),
                                  model.tag_set.end());

    std::vector<std::string> words;
    for (int w = sent_len(rng); w > 0; --w)
      words.push_back(word_pool[std::uniform_int_distribution<int>(
          0, 5)(rng)]);

    double oracle_score = 0.0;
    all_sequences_best(tagger, words, tags, &oracle_score);
    const auto predicted = tagger.tag(words);
    CHECK(tagger.path_score(words, predicted) ==
          doctest::Approx(oracle_score).epsilon(1e-12));
  }
}

TEST_CASE("model file round-trips through save and load") {
  HmmModel model = train_hmm({
      {{"the", "DT"}, {"dog", "NN"}, {"runs", "VB"}},
      {{"a", "DT"}, {"cat", "NN"}},
  });
  std::ostringstream out;
  model.save(out, "roundtrip");
  const std::string text = out.str();
  CHECK(text.find("[TRANSITION]") != std::string::npos);
  CHECK(text.find("[EMISSION]") != std::string::npos);

  std::istringstream in(text);
  HmmModel loaded = HmmModel::load(in);
  CHECK(loaded.tag_set == model.tag_set);
  CHECK(loaded.vocab == model.vocab);

  Tagger a(model), b(loaded);
  const std::vector<std::string> sentence = {"the", "dog", "runs"};
  CHECK(a.tag(sentence) == b.tag(sentence));
  std::ostringstream out2;
  loaded.save(out2, "roundtrip");
  CHECK(out2.str() == text);
}

TEST_CASE("reserved symbols in training data are rejected") {
  CHECK_THROWS_AS(train_hmm({{{"x", kStartTag}}}), std::invalid_argument);
  CHECK_THROWS_AS(train_hmm({{{kUnknownWord, "NN"}}}),
                  std::invalid_argument);
}
