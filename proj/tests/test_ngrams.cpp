#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

#include "crisisnet/ngrams.hpp"

using namespace crisisnet;

namespace {

Document doc(std::vector<std::string> tokens, Day day = 18500) {
  Document d;
  d.tweet_id = "t";
  d.tokens = std::move(tokens);
  d.day = day;
  return d;
}

}  // namespace

TEST_CASE("top_terms ordering and cumulative fraction") {
  const std::vector<Document> docs{doc({"laura", "storm", "laura"}),
                                   doc({"storm", "surge", "laura"})};
  const auto terms = top_terms(docs, 10);
  REQUIRE(terms.size() == 3);
  CHECK(terms[0].term == "laura");
  CHECK(terms[0].count == 3);
  CHECK(terms[0].cumulative_fraction == doctest::Approx(0.5));
  CHECK(terms[1].term == "storm");
  CHECK(terms[2].term == "surge");
  CHECK(terms[2].cumulative_fraction == doctest::Approx(1.0));

  // ties break lexicographically
  const auto tied = top_terms({doc({"b", "a"})}, 10);
  CHECK(tied[0].term == "a");
  CHECK(top_terms(docs, 2).size() == 2);
  CHECK(top_terms({}, 5).empty());
}

TEST_CASE("term_time_matrix zero fills the day range") {
  const std::vector<Document> docs{doc({"laura", "storm"}, 18500),
                                   doc({"laura"}, 18502)};
  const auto m = term_time_matrix(docs, {"laura", "storm"});
  REQUIRE(m.days.size() == 3);
  REQUIRE(m.counts.size() == 2);
  CHECK(m.counts[0] == std::vector<std::size_t>{1, 0, 1});
  CHECK(m.counts[1] == std::vector<std::size_t>{1, 0, 0});
}

TEST_CASE("heatmap csv header uses iso dates") {
  TermTimeMatrix m;
  m.terms = {"laura"};
  m.days = {18500, 18501};
  m.counts = {{2, 0}};
  std::ostringstream out;
  write_term_time_csv(out, m);
  CHECK(out.str() == "term,2020-08-26,2020-08-27\nlaura,2,0\n");
}

TEST_CASE("fit_bigrams does not cross document boundaries") {
  const auto m = fit_bigrams({doc({"a", "b"}), doc({"b", "c"})});
  CHECK(m.total_tokens == 4);
  CHECK(m.bigram_count(m.word_index("a"), m.word_index("b")) == 1);
  CHECK(m.bigram_count(m.word_index("b"), m.word_index("c")) == 1);
  // no "b"->"b" across the boundary
  CHECK(m.bigram_count(m.word_index("b"), m.word_index("b")) == 0);
}

TEST_CASE("conditionals sum to one for every seen history") {
  const auto m = fit_bigrams(
      {doc({"a", "b", "a", "c", "a", "b"}), doc({"c", "a"}), doc({"b", "b"})});
  for (std::size_t v = 0; v < m.vocab.size(); ++v) {
    if (m.history_total[v] == 0) continue;
    double sum = 0.0;
    for (std::size_t w = 0; w < m.vocab.size(); ++w)
      sum += static_cast<double>(m.bigram_count(static_cast<int>(v),
                                                static_cast<int>(w))) /
             static_cast<double>(m.history_total[v]);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sequence_logprob") {
  const auto m = fit_bigrams({doc({"a", "b", "a", "c"})});
  // P(a) = 2/4, P(b|a) = 1/2, P(a|b) = 1, P(c|a) = 1/2
  CHECK(sequence_logprob(m, {"a", "b", "a", "c"}) ==
        doctest::Approx(std::log(0.125)).epsilon(1e-12));
  CHECK(sequence_logprob(m, {"a"}) == doctest::Approx(std::log(0.5)));
  CHECK_THROWS_AS(sequence_logprob(m, {"a", "a"}), UnseenTransitionError);
  CHECK_THROWS_AS(sequence_logprob(m, {"zzz"}), UnseenTransitionError);
  CHECK_THROWS_AS(sequence_logprob(m, {"c", "a"}), UnseenTransitionError);
}

TEST_CASE("class objective worked example") {
  const auto m = fit_bigrams({doc({"a", "b", "a", "c"})});
  // everything in one class: unigram totals 4, successor totals 3
  ClassMap one;
  one.class_of.assign(m.vocab.size(), 0);
  one.num_classes = 1;
  const double expected = 2.0 * std::log(2.0)  // sum_w N(w) log N(w), a only
                          + 3.0 * std::log(3.0 / (4.0 * 3.0));
  CHECK(class_bigram_objective(m, one) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("singleton classes recover the word-level mutual information") {
  const auto m = fit_bigrams({doc({"a", "b", "a", "c", "b", "a"})});
  ClassMap singletons;
  singletons.num_classes = static_cast<int>(m.vocab.size());
  for (int i = 0; i < singletons.num_classes; ++i)
    singletons.class_of.push_back(i);
  double expected = 0.0;
  for (std::size_t w = 0; w < m.vocab.size(); ++w)
    if (m.unigram[w] > 0)
      expected += static_cast<double>(m.unigram[w]) *
                  std::log(static_cast<double>(m.unigram[w]));
  for (std::size_t v = 0; v < m.vocab.size(); ++v)
    for (std::size_t w = 0; w < m.vocab.size(); ++w) {
      const auto n = m.bigram_count(static_cast<int>(v), static_cast<int>(w));
      if (n == 0) continue;
      expected += static_cast<double>(n) *
                  std::log(static_cast<double>(n) /
                           (static_cast<double>(m.unigram[v]) *
                            static_cast<double>(m.successor_total[w])));
    }
  CHECK(class_bigram_objective(m, singletons) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("greedy_exchange improves monotonically and is deterministic") {
  const auto m = fit_bigrams({doc({"red", "apple", "red", "berry", "blue",
                                   "berry", "blue", "apple", "red", "apple"}),
                              doc({"blue", "berry", "red", "apple"})});
  const ClassMap c1 = greedy_exchange(m, 2, 42);
  const ClassMap c2 = greedy_exchange(m, 2, 42);
  CHECK(c1.class_of == c2.class_of);

  // local maximum: no single move improves the objective
  const double best = class_bigram_objective(m, c1);
  for (std::size_t w = 0; w < m.vocab.size(); ++w) {
    for (int c = 0; c < c1.num_classes; ++c) {
      if (c == c1.class_of[w]) continue;
      ClassMap moved = c1;
      moved.class_of[w] = c;
      CHECK(class_bigram_objective(m, moved) <= best + 1e-9);
    }
  }

  // random start is never better than the refined result
  ClassMap start;
  start.num_classes = 2;
  std::mt19937_64 rng(42);
  for (std::size_t w = 0; w < m.vocab.size(); ++w)
    start.class_of.push_back(static_cast<int>(rng() % 2));
  CHECK(best >= class_bigram_objective(m, start) - 1e-9);

  CHECK_THROWS_AS(greedy_exchange(m, 100, 1), std::invalid_argument);
}

TEST_CASE("bigram_graph_edges ordering and truncation") {
  const auto m = fit_bigrams(
      {doc({"a", "b", "a", "b", "a", "c", "b", "c"})});
  // bigrams: (a,b)x2, (b,a)x2, (a,c), (b,c), (c,b)
  const auto edges = bigram_graph_edges(m, 10);
  REQUIRE(edges.size() == 5);
  CHECK(edges[0].source == "a");
  CHECK(edges[0].target == "b");
  CHECK(edges[0].weight == doctest::Approx(2.0));
  CHECK(edges[1].source == "b");
  CHECK(edges[1].target == "a");
  // count ties break lexicographically by source then target
  CHECK(edges[2].source == "a");
  CHECK(edges[2].target == "c");
  CHECK(edges[3].source == "b");
  CHECK(edges[3].target == "c");
  CHECK(edges[4].source == "c");
  CHECK(edges[4].target == "b");
  CHECK(bigram_graph_edges(m, 2).size() == 2);
}
