#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "crisisnet/sentiment.hpp"

using namespace crisisnet;

namespace {

const Lexicon kLex = {{"good", 1.9}, {"bad", -1.9}, {"love", 2.0},
                      {"hate", -2.0}, {"safe", 1.2}};

Document doc(std::vector<std::string> tokens, Day day = 18500) {
  Document d;
  d.tweet_id = "t";
  d.tokens = std::move(tokens);
  d.day = day;
  return d;
}

}  // namespace

TEST_CASE("compound score") {
  CHECK(compound_score({"nothing", "matches"}, kLex) == 0.0);
  CHECK(compound_score({"good"}, kLex) ==
        doctest::Approx(1.9 / std::sqrt(1.9 * 1.9 + 15.0)).epsilon(1e-9));
  CHECK(compound_score({"good"}, kLex) == doctest::Approx(0.4404).epsilon(1e-3));
  CHECK(compound_score({"love", "hate"}, kLex) == 0.0);
}

TEST_CASE("compound score bounded and monotone") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(0, 12);
  const std::vector<std::string> words{"good", "bad",  "love",
                                       "hate", "safe", "filler"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> tokens;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) tokens.push_back(words[rng() % words.size()]);
    const double base = compound_score(tokens, kLex);
    CHECK(std::abs(base) < 1.0);
    tokens.push_back("love");
    CHECK(compound_score(tokens, kLex) >= base);
  }
}

TEST_CASE("classify thresholds") {
  CHECK(classify(0.0) == SentimentLabel::neutral);
  CHECK(classify(0.4404) == SentimentLabel::positive);
  CHECK(classify(-0.05) == SentimentLabel::negative);
  CHECK(classify(0.05) == SentimentLabel::positive);
  CHECK(classify(0.049) == SentimentLabel::neutral);
  CHECK_THROWS_AS(classify(1.5), std::invalid_argument);
  CHECK_THROWS_AS(classify(-1.5), std::invalid_argument);
}

TEST_CASE("classify partitions [-1,1]") {
  for (double c = -1.0; c <= 1.0; c += 0.001) {
    int hits = 0;
    const SentimentLabel label = classify(c);
    if (label == SentimentLabel::negative) ++hits;
    if (label == SentimentLabel::neutral) ++hits;
    if (label == SentimentLabel::positive) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("timeseries counts and zero fill") {
  CHECK(sentiment_timeseries({}, kLex).empty());

  const Day d = 18500;
  const auto series = sentiment_timeseries(
      {doc({"love"}, d), doc({"good"}, d), doc({"hate"}, d)}, kLex);
  REQUIRE(series.size() == 1);
  CHECK(series[0].second.negative == 1);
  CHECK(series[0].second.neutral == 0);
  CHECK(series[0].second.positive == 2);

  const auto neutral = sentiment_timeseries(
      {doc({"x"}, d), doc({"y"}, d), doc({"z"}, d), doc({}, d), doc({"w"}, d)},
      kLex);
  CHECK(neutral[0].second.neutral == 5);

  const auto gap = sentiment_timeseries({doc({"love"}, d), doc({"hate"}, d + 2)},
                                        kLex);
  REQUIRE(gap.size() == 3);
  CHECK(gap[1].second.negative + gap[1].second.neutral +
            gap[1].second.positive ==
        0);
}

TEST_CASE("per-day counts sum to document count") {
  std::mt19937 rng(17);
  std::vector<Document> docs;
  const std::vector<std::string> words{"good", "bad", "meh", "love", "hate"};
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> tokens;
    for (unsigned k = 0; k < rng() % 5; ++k)
      tokens.push_back(words[rng() % words.size()]);
    docs.push_back(doc(std::move(tokens), 18500 + static_cast<Day>(rng() % 7)));
  }
  std::size_t total = 0;
  for (const auto& [_, s] : sentiment_timeseries(docs, kLex))
    total += s.negative + s.neutral + s.positive;
  CHECK(total == docs.size());
}

TEST_CASE("csv output") {
  std::ostringstream out;
  write_sentiment_csv(out, sentiment_timeseries({doc({"love"}, 18500)}, kLex));
  CHECK(out.str() == "day,negative,neutral,positive\n2020-08-26,0,0,1\n");
}

TEST_CASE("lexicon file loading") {
  const std::string path = "lexicon_test.tsv";
  {
    std::ofstream f(path);
    f << "good\t1.9\nbad\t-1.9\n";
  }
  const Lexicon lex = load_lexicon(path);
  CHECK(lex.at("good") == doctest::Approx(1.9));
  CHECK(lex.at("bad") == doctest::Approx(-1.9));
  {
    std::ofstream f(path);
    f << "noseparator\n";
  }
  CHECK_THROWS_AS(load_lexicon(path), std::runtime_error);
  std::remove(path.c_str());
}
