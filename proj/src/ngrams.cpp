#include "crisisnet/ngrams.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>

namespace crisisnet {

std::vector<TermCount> top_terms(const std::vector<Document>& docs,
                                 std::size_t k) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) {
      ++counts[t];
      ++total;
    }
  }
  std::vector<TermCount> ranked;
  ranked.reserve(counts.size());
  for (const auto& [term, count] : counts) ranked.push_back({term, count, 0.0});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const TermCount& a, const TermCount& b) {
                     if (a.count != b.count) return a.count > b.count;
                     return a.term < b.term;
                   });
  if (ranked.size() > k) ranked.resize(k);
  std::size_t running = 0;
  for (auto& tc : ranked) {
    running += tc.count;
    tc.cumulative_fraction = total ? static_cast<double>(running) / total : 0.0;
  }
  return ranked;
}

TermTimeMatrix term_time_matrix(const std::vector<Document>& docs,
                                const std::vector<std::string>& terms) {
  if (terms.empty()) throw std::invalid_argument("term list is empty");
  TermTimeMatrix m;
  m.terms = terms;
  if (docs.empty()) {
    m.counts.assign(terms.size(), {});
    return m;
  }
  Day lo = docs.front().day, hi = lo;
  for (const auto& d : docs) {
    lo = std::min(lo, d.day);
    hi = std::max(hi, d.day);
  }
  for (Day d = lo; d <= hi; ++d) m.days.push_back(d);
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < terms.size(); ++i) row[terms[i]] = i;
  m.counts.assign(terms.size(), std::vector<std::size_t>(m.days.size(), 0));
  for (const auto& doc : docs) {
    const std::size_t col = static_cast<std::size_t>(doc.day - lo);
    for (const auto& t : doc.tokens) {
      auto it = row.find(t);
      if (it != row.end()) ++m.counts[it->second][col];
    }
  }
  return m;
}

void write_term_time_csv(std::ostream& out, const TermTimeMatrix& m) {
  out << "term";
  for (Day d : m.days) out << ',' << iso_date(d);
  out << "\n";
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    out << m.terms[i];
    for (std::size_t j = 0; j < m.days.size(); ++j) out << ',' << m.counts[i][j];
    out << "\n";
  }
}

void write_top_terms_csv(std::ostream& out, const std::vector<TermCount>& terms) {
  out << "rank,term,count,cumulative_fraction\n";
  char buf[32];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.4f", terms[i].cumulative_fraction);
    out << (i + 1) << ',' << terms[i].term << ',' << terms[i].count << ','
        << buf << "\n";
  }
}

BigramModel fit_bigrams(const std::vector<Document>& docs) {
  BigramModel m;
  auto intern = [&m](const std::string& w) {
    auto it = m.index.find(w);
    if (it != m.index.end()) return it->second;
    int id = static_cast<int>(m.vocab.size());
    m.index.emplace(w, id);
    m.vocab.push_back(w);
    m.unigram.push_back(0);
    m.history_total.push_back(0);
    m.successor_total.push_back(0);
    return id;
  };
  for (const auto& doc : docs) {
    int prev = -1;
    for (const auto& w : doc.tokens) {
      int id = intern(w);
      ++m.unigram[id];
      ++m.total_tokens;
      if (prev >= 0) {
        ++m.bigram[BigramModel::key(prev, id)];
        ++m.history_total[prev];
        ++m.successor_total[id];
      }
      prev = id;
    }
  }
  return m;
}

double sequence_logprob(const BigramModel& model,
                        const std::vector<std::string>& seq) {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  int first = model.word_index(seq[0]);
  if (first < 0 || model.unigram[first] == 0)
    throw UnseenTransitionError("unseen word: " + seq[0]);
  double logp = std::log(static_cast<double>(model.unigram[first]) /
                         static_cast<double>(model.total_tokens));
  int prev = first;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    int cur = model.word_index(seq[i]);
    if (cur < 0) throw UnseenTransitionError("unseen word: " + seq[i]);
    const std::size_t joint = model.bigram_count(prev, cur);
    const std::size_t hist = model.history_total[prev];
    if (joint == 0 || hist == 0) {
      throw UnseenTransitionError("unseen transition: " + seq[i - 1] + " -> " +
                                  seq[i]);
    }
    logp += std::log(static_cast<double>(joint) / static_cast<double>(hist));
    prev = cur;
  }
  return logp;
}

double class_bigram_objective(const BigramModel& model,
                              const ClassMap& classes) {
  const std::size_t vocab = model.vocab.size();
  if (classes.class_of.size() != vocab)
    throw std::invalid_argument("class map does not cover the vocabulary");
  double f = 0.0;
  for (std::size_t w = 0; w < vocab; ++w) {
    const double n = static_cast<double>(model.unigram[w]);
    if (n > 0) f += n * std::log(n);
  }
  // Class aggregates: histories carry unigram mass, successors carry
  // bigram-second-position mass.
  std::vector<double> hist(classes.num_classes, 0.0);
  std::vector<double> succ(classes.num_classes, 0.0);
  for (std::size_t w = 0; w < vocab; ++w) {
    hist[classes.class_of[w]] += static_cast<double>(model.unigram[w]);
    succ[classes.class_of[w]] += static_cast<double>(model.successor_total[w]);
  }
  std::unordered_map<std::uint64_t, double> class_pair;
  for (const auto& [key, count] : model.bigram) {
    const int v = static_cast<int>(key >> 32);
    const int w = static_cast<int>(key & 0xFFFFFFFFu);
    const std::uint64_t ck =
        BigramModel::key(classes.class_of[v], classes.class_of[w]);
    class_pair[ck] += static_cast<double>(count);
  }
  for (const auto& [ck, n] : class_pair) {
    if (n <= 0) continue;
    const int gv = static_cast<int>(ck >> 32);
    const int gw = static_cast<int>(ck & 0xFFFFFFFFu);
    f += n * std::log(n / (hist[gv] * succ[gw]));
  }
  return f;
}

ClassMap greedy_exchange(const BigramModel& model, int num_classes,
                         std::uint64_t seed) {
  const int vocab = static_cast<int>(model.vocab.size());
  if (num_classes < 1) throw std::invalid_argument("class count must be >= 1");
  if (num_classes > vocab)
    throw std::invalid_argument("more classes than vocabulary words");
  ClassMap classes;
  classes.num_classes = num_classes;
  classes.class_of.resize(vocab);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, num_classes - 1);
  for (int w = 0; w < vocab; ++w) classes.class_of[w] = pick(rng);

  double current = class_bigram_objective(model, classes);
  constexpr double kMinGain = 1e-12;
  for (;;) {
    int best_word = -1, best_class = -1;
    double best_value = current;
    for (int w = 0; w < vocab; ++w) {
      const int home = classes.class_of[w];
      for (int c = 0; c < num_classes; ++c) {
        if (c == home) continue;
        classes.class_of[w] = c;
        const double value = class_bigram_objective(model, classes);
        if (value > best_value + kMinGain) {
          best_value = value;
          best_word = w;
          best_class = c;
        }
      }
      classes.class_of[w] = home;
    }
    if (best_word < 0) break;
    classes.class_of[best_word] = best_class;
    current = best_value;
  }
  return classes;
}

std::vector<WeightedEdge> bigram_graph_edges(const BigramModel& model,
                                             std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  std::vector<WeightedEdge> edges;
  edges.reserve(model.bigram.size());
  for (const auto& [key, count] : model.bigram) {
    const int v = static_cast<int>(key >> 32);
    const int w = static_cast<int>(key & 0xFFFFFFFFu);
    edges.push_back({model.vocab[v], model.vocab[w],
                     static_cast<double>(count)});
  }
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              if (a.source != b.source) return a.source < b.source;
              return a.target < b.target;
            });
  if (edges.size() > top_k) edges.resize(top_k);
  return edges;
}

}  // namespace crisisnet
