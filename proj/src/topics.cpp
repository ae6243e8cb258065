#include "crisisnet/topics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

namespace crisisnet {

std::size_t Corpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

Corpus build_corpus(const std::vector<Document>& docs) {
  Corpus c;
  for (const auto& doc : docs) {
    std::vector<int> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& w : doc.tokens) {
      auto it = c.index.find(w);
      int id;
      if (it == c.index.end()) {
        id = static_cast<int>(c.vocab.size());
        c.index.emplace(w, id);
        c.vocab.push_back(w);
      } else {
        id = it->second;
      }
      ids.push_back(id);
    }
    c.docs.push_back(std::move(ids));
    c.doc_ids.push_back(doc.tweet_id);
  }
  return c;
}

void LdaConfig::validate() const {
  if (topics < 1) throw std::invalid_argument("topic count must be >= 1");
  if (resolved_alpha() <= 0) throw std::invalid_argument("alpha must be > 0");
  if (beta <= 0) throw std::invalid_argument("beta must be > 0");
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
}

LdaState init_state(const Corpus& corpus, const LdaConfig& config) {
  config.validate();
  if (corpus.docs.empty() || corpus.vocab.empty())
    throw std::invalid_argument("empty corpus");
  const int T = config.topics;
  const int W = static_cast<int>(corpus.vocab.size());
  const int D = static_cast<int>(corpus.docs.size());

  LdaState s;
  s.num_topics = T;
  s.vocab_size = W;
  s.ndt.assign(D, std::vector<int>(T, 0));
  s.ntw.assign(T, std::vector<int>(W, 0));
  s.nd.assign(D, 0);
  s.nt.assign(T, 0);
  s.z.resize(D);

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> pick(0, T - 1);
  for (int d = 0; d < D; ++d) {
    const auto& words = corpus.docs[d];
    s.z[d].resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const int t = pick(rng);
      s.z[d][i] = t;
      ++s.ndt[d][t];
      ++s.ntw[t][words[i]];
      ++s.nd[d];
      ++s.nt[t];
      ++s.total_tokens;
    }
  }
  return s;
}

std::vector<double> gibbs_conditional(const LdaState& state, int d, int w,
                                      double alpha, double beta) {
  const int T = state.num_topics;
  const double W = static_cast<double>(state.vocab_size);
  std::vector<double> p(T);
  double sum = 0.0;
  for (int t = 0; t < T; ++t) {
    const int ndt = state.ndt[d][t];
    const int ntw = state.ntw[t][w];
    if (ndt < 0 || ntw < 0)
      throw std::logic_error("negative count after exclusion");
    const double doc_part =
        (ndt + alpha) / (state.nd[d] + T * alpha);
    const double word_part =
        (ntw + beta) / (state.nt[t] + W * beta);
    p[t] = doc_part * word_part;
    sum += p[t];
  }
  for (double& x : p) x /= sum;
  return p;
}

void run_gibbs(LdaState& state, const Corpus& corpus, const LdaConfig& config) {
  config.validate();
  const double alpha = config.resolved_alpha();
  const double beta = config.beta;
  // Separate stream from init so sweeps don't depend on init draws count.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int D = static_cast<int>(corpus.docs.size());
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    for (int d = 0; d < D; ++d) {
      const auto& words = corpus.docs[d];
      for (std::size_t i = 0; i < words.size(); ++i) {
        const int w = words[i];
        const int old_t = state.z[d][i];
        --state.ndt[d][old_t];
        --state.ntw[old_t][w];
        --state.nd[d];
        --state.nt[old_t];

        const std::vector<double> p = gibbs_conditional(state, d, w, alpha, beta);
        const double u = unit(rng);
        double acc = 0.0;
        int new_t = state.num_topics - 1;
        for (int t = 0; t < state.num_topics; ++t) {
          acc += p[t];
          if (u < acc) {
            new_t = t;
            break;
          }
        }

        state.z[d][i] = new_t;
        ++state.ndt[d][new_t];
        ++state.ntw[new_t][w];
        ++state.nd[d];
        ++state.nt[new_t];
      }
    }
  }
}

LdaPosterior posterior(const LdaState& state, const LdaConfig& config) {
  const double alpha = config.resolved_alpha();
  const double beta = config.beta;
  const int T = state.num_topics;
  const int W = state.vocab_size;
  LdaPosterior post;
  post.theta.resize(state.ndt.size());
  for (std::size_t d = 0; d < state.ndt.size(); ++d) {
    post.theta[d].resize(T);
    for (int t = 0; t < T; ++t) {
      post.theta[d][t] =
          (state.ndt[d][t] + alpha) / (state.nd[d] + T * alpha);
    }
  }
  post.phi.resize(T);
  for (int t = 0; t < T; ++t) {
    post.phi[t].resize(W);
    for (int w = 0; w < W; ++w) {
      post.phi[t][w] = (state.ntw[t][w] + beta) / (state.nt[t] + W * beta);
    }
  }
  return post;
}

std::uint64_t DocFrequencies::key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::size_t DocFrequencies::df(int w) const {
  auto it = single.find(w);
  return it == single.end() ? 0 : it->second;
}

std::size_t DocFrequencies::codf(int a, int b) const {
  auto it = pair.find(key(a, b));
  return it == pair.end() ? 0 : it->second;
}

DocFrequencies doc_frequencies(const Corpus& corpus) {
  DocFrequencies f;
  for (const auto& doc : corpus.docs) {
    std::set<int> uniq(doc.begin(), doc.end());
    for (auto it = uniq.begin(); it != uniq.end(); ++it) {
      ++f.single[*it];
      for (auto jt = std::next(it); jt != uniq.end(); ++jt) {
        ++f.pair[DocFrequencies::key(*it, *jt)];
      }
    }
  }
  return f;
}

namespace {

// Top-M word ids of one topic, probability descending then lexicographic.
std::vector<int> top_word_ids(const std::vector<double>& phi_row,
                              const Corpus& corpus, std::size_t m) {
  std::vector<int> ids(phi_row.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (phi_row[a] != phi_row[b]) return phi_row[a] > phi_row[b];
    return corpus.vocab[a] < corpus.vocab[b];
  });
  if (ids.size() > m) ids.resize(m);
  return ids;
}

}  // namespace

double umass_coherence(const std::vector<std::vector<double>>& phi, int t,
                       const Corpus& corpus, const DocFrequencies& freqs,
                       int top_words) {
  if (top_words < 2) throw std::invalid_argument("top_words must be >= 2");
  const std::size_t m =
      std::min<std::size_t>(top_words, corpus.vocab.size());
  const std::vector<int> v = top_word_ids(phi[t], corpus, m);
  double score = 0.0;
  for (std::size_t l = 1; l < v.size(); ++l) {
    for (std::size_t k = 0; k < l; ++k) {
      const double co = static_cast<double>(freqs.codf(v[l], v[k]));
      const double single = static_cast<double>(freqs.df(v[k]));
      if (single == 0) continue;  // never happens for words ranked by phi
      score += std::log((co + 1.0) / single);
    }
  }
  return score;
}

TopicSelection select_topic_count(const Corpus& corpus,
                                  const std::vector<int>& k_grid,
                                  const LdaConfig& config_template,
                                  int coherence_top_words) {
  if (k_grid.empty()) throw std::invalid_argument("empty K grid");
  const DocFrequencies freqs = doc_frequencies(corpus);
  TopicSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> grid = k_grid;
  std::sort(grid.begin(), grid.end());
  for (int k : grid) {
    LdaConfig cfg = config_template;
    cfg.topics = k;
    cfg.seed = config_template.seed + static_cast<std::uint64_t>(k);
    LdaState state = init_state(corpus, cfg);
    run_gibbs(state, corpus, cfg);
    const LdaPosterior post = posterior(state, cfg);
    double mean = 0.0;
    for (int t = 0; t < k; ++t)
      mean += umass_coherence(post.phi, t, corpus, freqs, coherence_top_words);
    mean /= k;
    sel.coherence_by_k.emplace_back(k, mean);
    if (mean > best) {  // ties keep the smaller K seen first
      best = mean;
      sel.best_k = k;
    }
  }
  return sel;
}

std::vector<std::pair<std::string, double>> top_words(
    const std::vector<std::vector<double>>& phi, int t, const Corpus& corpus,
    std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::vector<int> ids = top_word_ids(phi[t], corpus, k);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(ids.size());
  for (int id : ids) out.emplace_back(corpus.vocab[id], phi[t][id]);
  return out;
}

void write_topic_report_row(
    std::ostream& out, int community, int topic,
    const std::vector<std::pair<std::string, double>>& words) {
  char buf[32];
  for (std::size_t rank = 0; rank < words.size(); ++rank) {
    std::snprintf(buf, sizeof buf, "%.3f", words[rank].second);
    out << community << ',' << topic << ',' << (rank + 1) << ','
        << words[rank].first << ',' << buf << "\n";
  }
}

void write_coherence_csv(
    std::ostream& out, const std::vector<std::pair<int, double>>& coherence_by_k) {
  out << "K,mean_coherence\n";
  char buf[32];
  for (const auto& [k, c] : coherence_by_k) {
    std::snprintf(buf, sizeof buf, "%.6f", c);
    out << k << ',' << buf << "\n";
  }
}

}  // namespace crisisnet
