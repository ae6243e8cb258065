#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

#include "crisisnet/topics.hpp"

using namespace crisisnet;

namespace {

Document doc(std::string id, std::vector<std::string> tokens) {
  Document d;
  d.tweet_id = std::move(id);
  d.tokens = std::move(tokens);
  d.day = 18500;
  return d;
}

}  // namespace

TEST_CASE("build_corpus") {
  const Corpus c = build_corpus({doc("1", {"storm", "laura", "storm"}),
                                 doc("2", {"laura", "surge"})});
  CHECK(c.vocab.size() == 3);
  CHECK(c.docs.size() == 2);
  CHECK(c.total_tokens() == 5);
  // ids are stable: same word maps to the same index everywhere
  CHECK(c.docs[0][0] == c.docs[0][2]);
  CHECK(c.docs[0][1] == c.docs[1][0]);
  CHECK(c.doc_ids == std::vector<std::string>{"1", "2"});
}

TEST_CASE("config validation and alpha default") {
  LdaConfig cfg;
  cfg.topics = 5;
  CHECK(cfg.resolved_alpha() == doctest::Approx(10.0));
  cfg.alpha = 0.7;
  CHECK(cfg.resolved_alpha() == doctest::Approx(0.7));

  LdaConfig bad;
  bad.topics = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.topics = 2;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.beta = 0.01;
  bad.sweeps = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("init_state count consistency") {
  const Corpus c = build_corpus({doc("1", {"a", "b", "a"}), doc("2", {"c", "b"})});
  LdaConfig cfg;
  cfg.topics = 3;
  cfg.seed = 9;
  const LdaState s = init_state(c, cfg);
  CHECK(s.total_tokens == 5);
  int nd_sum = 0, nt_sum = 0;
  for (int v : s.nd) nd_sum += v;
  for (int v : s.nt) nt_sum += v;
  CHECK(nd_sum == 5);
  CHECK(nt_sum == 5);
  for (std::size_t d = 0; d < c.docs.size(); ++d) {
    int row = 0;
    for (int t = 0; t < s.num_topics; ++t) row += s.ndt[d][t];
    CHECK(row == s.nd[d]);
  }
  // deterministic given the seed
  const LdaState again = init_state(c, cfg);
  CHECK(s.z == again.z);

  CHECK_THROWS_AS(init_state(build_corpus({}), cfg), std::invalid_argument);
}

TEST_CASE("gibbs conditional worked example") {
  // Document "a a" over vocab {a, b}, T = 2, alpha = beta = 1, z = [0, 0];
  // resample token 2.
  LdaState s;
  s.num_topics = 2;
  s.vocab_size = 2;
  s.z = {{0, 0}};
  s.ndt = {{2, 0}};
  s.ntw = {{2, 0}, {0, 0}};
  s.nd = {2};
  s.nt = {2, 0};
  s.total_tokens = 2;

  // remove token 2's assignment, as the sampler would
  s.ndt[0][0] -= 1;
  s.ntw[0][0] -= 1;
  s.nd[0] -= 1;
  s.nt[0] -= 1;

  const auto p = gibbs_conditional(s, 0, 0, 1.0, 1.0);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(8.0 / 11.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_gibbs preserves counts and is deterministic") {
  std::mt19937_64 rng(5);
  std::vector<Document> docs;
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  for (int d = 0; d < 20; ++d) {
    std::vector<std::string> tokens;
    for (int i = 0; i < 8; ++i) tokens.push_back(words[rng() % words.size()]);
    docs.push_back(doc(std::to_string(d), tokens));
  }
  const Corpus c = build_corpus(docs);
  LdaConfig cfg;
  cfg.topics = 3;
  cfg.sweeps = 30;
  cfg.seed = 77;

  LdaState s = init_state(c, cfg);
  run_gibbs(s, c, cfg);
  CHECK(s.total_tokens == c.total_tokens());
  std::vector<int> ndt_topic(cfg.topics, 0), ntw_topic(cfg.topics, 0);
  for (const auto& row : s.ndt)
    for (int t = 0; t < cfg.topics; ++t) ndt_topic[t] += row[t];
  for (int t = 0; t < cfg.topics; ++t) {
    int words_in_topic = 0;
    for (int w = 0; w < s.vocab_size; ++w) words_in_topic += s.ntw[t][w];
    CHECK(words_in_topic == s.nt[t]);
    CHECK(ndt_topic[t] == s.nt[t]);
  }

  LdaState s2 = init_state(c, cfg);
  run_gibbs(s2, c, cfg);
  CHECK(s.z == s2.z);
}

TEST_CASE("posterior rows are distributions") {
  const Corpus c = build_corpus({doc("1", {"a", "b", "a"}), doc("2", {"c", "b"})});
  LdaConfig cfg;
  cfg.topics = 2;
  cfg.sweeps = 10;
  cfg.seed = 3;
  LdaState s = init_state(c, cfg);
  run_gibbs(s, c, cfg);
  const LdaPosterior post = posterior(s, cfg);
  for (const auto& row : post.theta) {
    double sum = 0.0;
    for (double v : row) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (const auto& row : post.phi) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("doc frequencies use set semantics") {
  const Corpus c = build_corpus(
      {doc("1", {"a", "a", "b"}), doc("2", {"a", "c"}), doc("3", {"b"})});
  const DocFrequencies f = doc_frequencies(c);
  const int a = c.index.at("a"), b = c.index.at("b"), cc = c.index.at("c");
  CHECK(f.df(a) == 2);  // repeated "a" in doc 1 counts once
  CHECK(f.df(b) == 2);
  CHECK(f.codf(a, b) == 1);
  CHECK(f.codf(b, a) == 1);  // symmetric
  CHECK(f.codf(b, cc) == 0);
}

TEST_CASE("umass coherence hand computation") {
  // Two top words v1, v2 (phi order): score = log((codf(v2,v1)+1)/df(v1)).
  const Corpus c = build_corpus(
      {doc("1", {"a", "b"}), doc("2", {"a"}), doc("3", {"a"})});
  const DocFrequencies f = doc_frequencies(c);
  std::vector<std::vector<double>> phi = {{0.7, 0.3}};
  // top words by phi: a then b (indices 0, 1); df(a)=3, codf=1
  const double expected = std::log((1.0 + 1.0) / 3.0);
  CHECK(umass_coherence(phi, 0, c, f, 2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("select_topic_count separable corpus") {
  // Two disjoint vocabularies; K=2 should dominate K=1 in coherence.
  std::mt19937_64 rng(1);
  std::vector<Document> docs;
  const std::vector<std::string> va{"alpha", "bravo", "charlie", "delta"};
  const std::vector<std::string> vb{"xray", "yankee", "zulu", "whiskey"};
  for (int d = 0; d < 40; ++d) {
    const auto& v = (d % 2 == 0) ? va : vb;
    std::vector<std::string> tokens;
    for (int i = 0; i < 10; ++i) tokens.push_back(v[rng() % v.size()]);
    docs.push_back(doc(std::to_string(d), tokens));
  }
  const Corpus c = build_corpus(docs);
  LdaConfig tmpl;
  tmpl.sweeps = 100;
  tmpl.seed = 11;
  const TopicSelection sel = select_topic_count(c, {1, 2}, tmpl, 4);
  REQUIRE(sel.coherence_by_k.size() == 2);
  CHECK(sel.coherence_by_k[0].first == 1);
  CHECK(sel.coherence_by_k[1].first == 2);
  CHECK(sel.best_k == 2);
  CHECK_THROWS_AS(select_topic_count(c, {}, tmpl), std::invalid_argument);
}

TEST_CASE("top_words ordering") {
  const Corpus c = build_corpus({doc("1", {"b", "a", "c"})});
  std::vector<std::vector<double>> phi(1, std::vector<double>(3, 0.0));
  phi[0][c.index.at("a")] = 0.3;
  phi[0][c.index.at("b")] = 0.5;
  phi[0][c.index.at("c")] = 0.2;
  const auto words = top_words(phi, 0, c, 2);
  REQUIRE(words.size() == 2);
  CHECK(words[0].first == "b");
  CHECK(words[1].first == "a");

  // probability ties break lexicographically
  phi[0][c.index.at("a")] = 0.5;
  CHECK(top_words(phi, 0, c, 1)[0].first == "a");
}

TEST_CASE("topic and coherence csv formats") {
  std::ostringstream out;
  write_topic_report_row(out, 1, 0, {{"storm", 0.4216}, {"laura", 0.1}});
  CHECK(out.str() ==
        "1,0,1,storm,0.422\n"
        "1,0,2,laura,0.100\n");

  std::ostringstream coh;
  write_coherence_csv(coh, {{2, -1.25}, {3, -2.0}});
  CHECK(coh.str() == "K,mean_coherence\n2,-1.250000\n3,-2.000000\n");
}
