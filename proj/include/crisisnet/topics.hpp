#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crisisnet/textprep.hpp"

namespace crisisnet {

// Integer-coded corpus shared by the sampler and coherence scoring.
struct Corpus {
  std::vector<std::string> vocab;            // index -> word
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> docs;        // token ids, document order kept
  std::vector<std::string> doc_ids;

  std::size_t total_tokens() const;
};

Corpus build_corpus(const std::vector<Document>& docs);

struct LdaConfig {
  int topics = 10;
  double alpha = -1.0;  // < 0 means 50 / topics
  double beta = 0.01;
  int sweeps = 500;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha > 0 ? alpha : 50.0 / topics; }
  void validate() const;  // throws std::invalid_argument
};

struct LdaState {
  int num_topics = 0;
  int vocab_size = 0;
  std::vector<std::vector<int>> z;       // per doc, per token position
  std::vector<std::vector<int>> ndt;     // doc x topic
  std::vector<std::vector<int>> ntw;     // topic x word
  std::vector<int> nd;                   // per-doc token totals
  std::vector<int> nt;                   // per-topic token totals
  std::size_t total_tokens = 0;
};

struct LdaPosterior {
  std::vector<std::vector<double>> theta;  // doc x topic
  std::vector<std::vector<double>> phi;    // topic x word
};

// Uniform random topic per token from the seeded RNG. Empty corpus throws.
LdaState init_state(const Corpus& corpus, const LdaConfig& config);

// Collapsed Gibbs conditional for one token of word w in document d, with the
// token's assignment already removed from the counts. Normalized over topics.
std::vector<double> gibbs_conditional(const LdaState& state, int d, int w,
                                      double alpha, double beta);

// config.sweeps full passes in corpus order; deterministic given config.seed.
void run_gibbs(LdaState& state, const Corpus& corpus, const LdaConfig& config);

LdaPosterior posterior(const LdaState& state, const LdaConfig& config);

// Document-frequency tables for UMass coherence, set semantics per document.
struct DocFrequencies {
  std::unordered_map<int, std::size_t> single;
  std::unordered_map<std::uint64_t, std::size_t> pair;  // key(min,max)

  static std::uint64_t key(int a, int b);
  std::size_t df(int w) const;
  std::size_t codf(int a, int b) const;
};

DocFrequencies doc_frequencies(const Corpus& corpus);

// UMass coherence of topic t over its top-M words by phi.
double umass_coherence(const std::vector<std::vector<double>>& phi, int t,
                       const Corpus& corpus, const DocFrequencies& freqs,
                       int top_words);

struct TopicSelection {
  int best_k = 0;
  std::vector<std::pair<int, double>> coherence_by_k;
};

// One model per K, seeded template.seed + K; returns the K with the highest
// mean coherence, smallest K on ties.
TopicSelection select_topic_count(const Corpus& corpus,
                                  const std::vector<int>& k_grid,
                                  const LdaConfig& config_template,
                                  int coherence_top_words = 10);

// Descending by probability, ties lexicographic.
std::vector<std::pair<std::string, double>> top_words(
    const std::vector<std::vector<double>>& phi, int t, const Corpus& corpus,
    std::size_t k);

// CSV "community,topic,rank,word,probability" with 3-decimal probabilities.
void write_topic_report_row(std::ostream& out, int community, int topic,
                            const std::vector<std::pair<std::string, double>>& words);

void write_coherence_csv(std::ostream& out,
                         const std::vector<std::pair<int, double>>& coherence_by_k);

}  // namespace crisisnet
