#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wordgroup/cooccur.hpp"

using namespace wordgroup;

namespace {

TokenStream random_corpus(std::mt19937& rng, std::size_t length, int vocab) {
  TokenStream t;
  for (std::size_t i = 0; i < length; ++i) t.push_back("w" + std::to_string(rng() % vocab));
  return t;
}

void check_against_oracle(const TokenStream& tokens, const WordList& targets,
                          const WordList& contexts, int side, int gap) {
  const auto table = count(tokens, targets, contexts, {side, gap});
  const auto expected = oracle::window_counts(tokens, targets, contexts, side, gap);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(table.positions(i) == expected.positions.at(targets[i]));
    for (std::size_t j = 0; j < contexts.size(); ++j) {
      const auto it = expected.cells.find({targets[i], contexts[j]});
      CHECK(table.count(i, j) == (it == expected.cells.end() ? 0 : it->second));
    }
  }
}

}  // namespace

TEST_CASE("window config validation") {
  CHECK_NOTHROW(WindowConfig{1, 0}.validate());
  CHECK_THROWS_AS((WindowConfig{0, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((WindowConfig{1, -1}).validate(), std::invalid_argument);
}

TEST_CASE("count on the worked corpus") {
  const TokenStream tokens{"a", "b", "a", "c", "a", "b"};
  const WordList targets{"a"}, contexts{"a", "b", "c"};

  SUBCASE("side 1, gap 0") {
    const auto t = count(tokens, targets, contexts, {1, 0});
    CHECK(t.count(0, 1) == 3);
    CHECK(t.count(0, 2) == 2);
    CHECK(t.count(0, 0) == 0);
    CHECK(t.positions(0) == 5);

    const auto v = to_vectors(t);
    CHECK_FALSE(v.flagged(0));
    const auto row = v.dense_row(0);
    CHECK(row[0] == 0.0);
    CHECK(row[1] == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
    CHECK(row[2] == doctest::Approx(2.0 / 5.0).epsilon(1e-15));
  }
  SUBCASE("side 1, gap 1") {
    const auto t = count(tokens, targets, contexts, {1, 1});
    CHECK(t.count(0, 0) == 4);
    CHECK(t.count(0, 1) == 0);
    CHECK(t.count(0, 2) == 0);
    CHECK(t.positions(0) == 4);
  }
  SUBCASE("oracle agrees") {
    check_against_oracle(tokens, targets, contexts, 1, 0);
    check_against_oracle(tokens, targets, contexts, 1, 1);
  }
}

TEST_CASE("count edge cases") {
  const auto single = count({"a"}, {"a"}, {"a"}, {3, 1});
  CHECK(single.positions(0) == 0);
  CHECK(single.row(0).empty());
  const auto v = to_vectors(single);
  CHECK(v.flagged(0));
  CHECK(v.usable().empty());

  const auto empty = count({}, {"a", "b"}, {"a"}, {1, 0});
  CHECK(empty.positions(0) == 0);
  CHECK(empty.positions(1) == 0);

  CHECK_THROWS_AS(count({"a"}, {"a", "a"}, {"a"}, {1, 0}), std::invalid_argument);
}

TEST_CASE("count matches brute force on random corpora") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto tokens = random_corpus(rng, 1 + rng() % 300, 1 + static_cast<int>(rng() % 12));
    WordList targets, contexts;
    for (int w = 0; w < 12; ++w) {
      if (rng() % 2) targets.push_back("w" + std::to_string(w));
      if (rng() % 3) contexts.push_back("w" + std::to_string(w));
    }
    const int side = 1 + static_cast<int>(rng() % 25);
    const int gap = static_cast<int>(rng() % 4);
    check_against_oracle(tokens, targets, contexts, side, gap);
  }
}

TEST_CASE("positions bound and truncation") {
  std::mt19937 rng(3);
  const auto tokens = random_corpus(rng, 500, 8);
  WordList words;
  for (int w = 0; w < 8; ++w) words.push_back("w" + std::to_string(w));
  const int side = 4;
  const auto t = count(tokens, words, words, {side, 0});
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint64_t occ = 0, row_total = 0;
    bool near_edge = false;
    for (std::size_t p = 0; p < tokens.size(); ++p) {
      if (tokens[p] != words[i]) continue;
      ++occ;
      near_edge |= p < static_cast<std::size_t>(side) || p + side >= tokens.size();
    }
    for (const auto& [j, n] : t.row(i)) row_total += n;
    // Contexts cover the whole vocabulary, so every position is counted.
    CHECK(row_total == t.positions(i));
    CHECK(t.positions(i) <= occ * 2 * side);
    CHECK((t.positions(i) == occ * 2 * side) == !near_edge);
  }
}

TEST_CASE("chunked counting merges to the single pass") {
  std::mt19937 rng(9);
  const auto tokens = random_corpus(rng, 1000, 15);
  WordList words;
  for (int w = 0; w < 15; ++w) words.push_back("w" + std::to_string(w));
  const WindowConfig cfg{5, 1};
  const auto whole = count(tokens, words, words, cfg);
  for (std::size_t cuts : {2u, 3u, 7u}) {
    CooccurrenceTable merged(words, words);
    for (std::size_t c = 0; c < cuts; ++c) {
      merged.merge(count_range(tokens, words, words, cfg, tokens.size() * c / cuts,
                               tokens.size() * (c + 1) / cuts));
    }
    CHECK(merged == whole);
  }
  CooccurrenceTable other({"x"}, words);
  CHECK_THROWS_AS(other.merge(whole), std::invalid_argument);
}

TEST_CASE("larger side length never decreases counts") {
  std::mt19937 rng(4);
  const auto tokens = random_corpus(rng, 400, 10);
  WordList words;
  for (int w = 0; w < 10; ++w) words.push_back("w" + std::to_string(w));
  auto prev = count(tokens, words, words, {1, 0});
  for (int side = 2; side <= 25; side += 3) {
    const auto next = count(tokens, words, words, {side, 0});
    for (std::size_t i = 0; i < words.size(); ++i) {
      CHECK(next.positions(i) >= prev.positions(i));
      for (std::size_t j = 0; j < words.size(); ++j) CHECK(next.count(i, j) >= prev.count(i, j));
    }
    prev = next;
  }
}

TEST_CASE("full-vocabulary rows sum to one") {
  std::mt19937 rng(8);
  const auto tokens = random_corpus(rng, 300, 20);
  const auto vocab = build_vocabulary(tokens);
  const auto words = select_top(vocab, vocab.size());
  const auto vectors = to_vectors(count(tokens, words, words, {3, 1}));
  for (std::size_t i : vectors.usable()) {
    double sum = 0;
    for (const auto& [j, p] : vectors.row(i)) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("count and vector files") {
  const TokenStream tokens{"a", "b", "a", "c", "a", "b"};
  const auto table = count(tokens, {"b", "a"}, {"c", "b", "a"}, {1, 0});
  std::ostringstream out;
  table.write_tsv(out);
  CHECK(out.str() ==
        "#positions target\ttotal\n"
        "b\t3\n"
        "a\t5\n"
        "#counts target\tcontext\tcount\n"
        "a\tb\t3\n"
        "a\tc\t2\n"
        "b\ta\t3\n");
  std::istringstream in(out.str());
  const auto back = CooccurrenceTable::read_tsv(in);
  CHECK(back.targets() == table.targets());
  for (std::size_t i = 0; i < table.targets().size(); ++i) {
    CHECK(back.positions(i) == table.positions(i));
    for (std::size_t j = 0; j < table.contexts().size(); ++j) {
      const auto& word = table.contexts()[j];
      const auto it = std::find(back.contexts().begin(), back.contexts().end(), word);
      const std::uint64_t got =
          it == back.contexts().end() ? 0 : back.count(i, it - back.contexts().begin());
      CHECK(got == table.count(i, j));
    }
  }

  std::ostringstream vec;
  to_vectors(table).write_tsv(vec);
  CHECK(vec.str() ==
        "a\tb\t0.59999999999999998\n"
        "a\tc\t0.40000000000000002\n"
        "b\ta\t1\n");
}
