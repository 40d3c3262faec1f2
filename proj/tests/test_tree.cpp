#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "treebench/normalize.hpp"
#include "treebench/tree.hpp"

using namespace treebench;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("simple sentence parses to the expected shape") {
  auto trees = parse_bracketed("(S (NP (DT the) (NN dog)) (VP (VB runs)))");
  REQUIRE(trees.size() == 1);
  const Tree& s = trees[0];
  CHECK(s.label == "S");
  REQUIRE(s.children.size() == 2);
  const Tree& np = s.children[0];
  CHECK(np.label == "NP");
  REQUIRE(np.children.size() == 2);
  CHECK(np.children[0].label == "DT");
  CHECK(np.children[0].token == "the");
  CHECK(np.children[1].label == "NN");
  CHECK(np.children[1].token == "dog");
  const Tree& vp = s.children[1];
  CHECK(vp.label == "VP");
  REQUIRE(vp.children.size() == 1);
  CHECK(vp.children[0].label == "VB");
  CHECK(vp.children[0].token == "runs");
  CHECK(s.leaf_count() == 3);
}

TEST_CASE("empty input gives an empty list") {
  CHECK(parse_bracketed("").empty());
  CHECK(parse_bracketed("  \n\t ").empty());
}

TEST_CASE("outer wrapper parentheses are unwrapped") {
  auto trees = parse_bracketed("( (S (NN dog)) )");
  REQUIRE(trees.size() == 1);
  CHECK(trees[0].label == "S");

  // multiple sentences, each wrapped
  auto two = parse_bracketed("( (S (NN a)) )\n( (S (NN b)) )");
  CHECK(two.size() == 2);
}

TEST_CASE("unbalanced input reports a byte offset") {
  CHECK_THROWS_AS(parse_bracketed("(S (NP"), BracketError);
  CHECK_THROWS_AS(parse_bracketed("(S (NN dog)))"), BracketError);
  CHECK_THROWS_AS(parse_bracketed(")"), BracketError);
  try {
    parse_bracketed("(S (NP");
    FAIL("expected BracketError");
  } catch (const BracketError& error) {
    CHECK(error.offset() == 3);  // the unclosed '(' of (NP
  }
}

TEST_CASE("degenerate nodes are rejected") {
  CHECK_THROWS_AS(parse_bracketed("(S ())"), BracketError);
  CHECK_THROWS_AS(parse_bracketed("(S)"), BracketError);
  CHECK_THROWS_AS(parse_bracketed("(S (NN dog) extra)"), BracketError);
}

TEST_CASE("emit round-trips") {
  const std::string text = "(S (NP (DT the) (NN dog)) (VP (VB runs)))";
  auto trees = parse_bracketed(text);
  REQUIRE(trees.size() == 1);
  CHECK(emit_bracketed(trees[0]) == text);
  auto again = parse_bracketed(emit_bracketed(trees[0]));
  REQUIRE(again.size() == 1);
  CHECK(again[0] == trees[0]);
}

TEST_CASE("corpus file round-trips through canonical emission") {
  const std::string path =
      std::string(TREEBENCH_CORPUS_DIR) + "/wsj_0003.mrg";
  auto trees = parse_bracketed(read_file(path));
  REQUIRE(!trees.empty());
  for (const Tree& tree : trees) {
    auto reparsed = parse_bracketed(emit_bracketed(tree));
    REQUIRE(reparsed.size() == 1);
    CHECK(reparsed[0] == tree);
  }
}

TEST_CASE("first corpus tree normalizes to an S root with full yield") {
  const std::string path =
      std::string(TREEBENCH_CORPUS_DIR) + "/wsj_0001.mrg";
  auto trees = parse_bracketed(read_file(path));
  REQUIRE(trees.size() == 2);
  auto normalized =
      normalize_tree(trees[0], PosMapping::penn_default(), {});
  REQUIRE(normalized.has_value());
  CHECK(normalized->label == "S");
  // "Pierre Vinken , 61 years old , will join the board as a nonexecutive
  // director Nov. 29 ." = 18 tokens, none of them traces
  CHECK(normalized->leaf_count() == 18);
  CHECK(extract_tagged_sentence(*normalized).size() == 18);
}
