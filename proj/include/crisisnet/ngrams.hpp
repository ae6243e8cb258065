#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "crisisnet/textprep.hpp"

namespace crisisnet {

struct TermCount {
  std::string term;
  std::size_t count = 0;
  double cumulative_fraction = 0.0;
};

// Descending by count, ties lexicographic; cumulative fraction over total
// token count.
std::vector<TermCount> top_terms(const std::vector<Document>& docs, std::size_t k);

struct TermTimeMatrix {
  std::vector<std::string> terms;
  std::vector<Day> days;
  // counts[term][day]
  std::vector<std::vector<std::size_t>> counts;
};

TermTimeMatrix term_time_matrix(const std::vector<Document>& docs,
                                const std::vector<std::string>& terms);

// CSV, first column "term", remaining columns ISO dates.
void write_term_time_csv(std::ostream& out, const TermTimeMatrix& m);

void write_top_terms_csv(std::ostream& out, const std::vector<TermCount>& terms);

struct BigramModel {
  std::vector<std::string> vocab;               // index -> word
  std::unordered_map<std::string, int> index;   // word -> index
  std::vector<std::size_t> unigram;             // N(w)
  std::unordered_map<std::uint64_t, std::size_t> bigram;  // key(v,w) -> N(v,w)
  std::vector<std::size_t> history_total;       // sum_w N(v,w)
  std::vector<std::size_t> successor_total;     // sum_v N(v,w)
  std::size_t total_tokens = 0;                 // N

  static std::uint64_t key(int v, int w) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
           static_cast<std::uint32_t>(w);
  }
  std::size_t bigram_count(int v, int w) const {
    auto it = bigram.find(key(v, w));
    return it == bigram.end() ? 0 : it->second;
  }
  int word_index(const std::string& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
};

// Adjacent pairs within each document only; unigrams over all tokens.
BigramModel fit_bigrams(const std::vector<Document>& docs);

struct UnseenTransitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// log[P(w1) * prod P(wn|wn-1)] with MLE estimates, no smoothing. Unknown
// words or zero-count conditionals throw UnseenTransitionError.
double sequence_logprob(const BigramModel& model,
                        const std::vector<std::string>& seq);

struct ClassMap {
  std::vector<int> class_of;  // per vocab index, in [0, num_classes)
  int num_classes = 0;
};

// F_bi = sum_w N(w) log N(w)
//      + sum_{Gv,Gw} N(Gv,Gw) log[N(Gv,Gw) / (N(Gv) N(Gw))]
// with N(Gv) aggregating unigram counts (history side) and N(Gw) successor
// totals; 0 log 0 terms contribute 0.
double class_bigram_objective(const BigramModel& model, const ClassMap& classes);

// Seeded random classing refined by best single-word moves until a local
// maximum of the objective. num_classes > vocab size throws
// std::invalid_argument.
ClassMap greedy_exchange(const BigramModel& model, int num_classes,
                         std::uint64_t seed);

struct WeightedEdge {
  std::string source;
  std::string target;
  double weight = 0.0;
};

// Edges = the top_k most frequent bigrams (count descending, then
// lexicographic by source/target); nodes = participating words.
std::vector<WeightedEdge> bigram_graph_edges(const BigramModel& model,
                                             std::size_t top_k);

}  // namespace crisisnet
