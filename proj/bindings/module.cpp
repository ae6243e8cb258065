#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crisisnet/graph.hpp"
#include "crisisnet/ngrams.hpp"
#include "crisisnet/pipeline.hpp"
#include "crisisnet/sentiment.hpp"
#include "crisisnet/topics.hpp"

namespace py = pybind11;
using namespace crisisnet;

namespace {

std::vector<Document> to_docs(const std::vector<std::vector<std::string>>& docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Document d;
    d.tweet_id = std::to_string(i);
    d.tokens = docs[i];
    d.day = 0;
    out.push_back(std::move(d));
  }
  return out;
}

const char* label_name(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::positive: return "positive";
    default: return "neutral";
  }
}

}  // namespace

PYBIND11_MODULE(_crisisnet, m) {
  m.doc() = "Crisis-communication analysis core (text prep, sentiment, "
            "bigrams, LDA, mention graphs)";

  // text preparation
  m.def("normalize", &normalize, py::arg("text"));
  m.def("tokenize", &tokenize, py::arg("text"));
  m.def(
      "remove_stopwords",
      [](const std::vector<std::string>& tokens,
         const std::vector<std::string>& stoplist) {
        return remove_stopwords(
            tokens, std::unordered_set<std::string>(stoplist.begin(),
                                                    stoplist.end()));
      },
      py::arg("tokens"), py::arg("stoplist"));
  m.def("default_stoplist", [] {
    const auto& s = default_stoplist();
    return std::vector<std::string>(s.begin(), s.end());
  });

  // sentiment
  m.def(
      "compound_score",
      [](const std::vector<std::string>& tokens,
         const std::map<std::string, double>& lexicon) {
        return compound_score(tokens,
                              Lexicon(lexicon.begin(), lexicon.end()));
      },
      py::arg("tokens"), py::arg("lexicon"));
  m.def(
      "classify", [](double c) { return std::string(label_name(classify(c))); },
      py::arg("compound"));

  // bigrams
  py::class_<BigramModel>(m, "BigramModel")
      .def_property_readonly("vocab",
                             [](const BigramModel& b) { return b.vocab; })
      .def_property_readonly("total_tokens",
                             [](const BigramModel& b) { return b.total_tokens; });
  m.def(
      "fit_bigrams",
      [](const std::vector<std::vector<std::string>>& docs) {
        return fit_bigrams(to_docs(docs));
      },
      py::arg("docs"));
  m.def("sequence_logprob", &sequence_logprob, py::arg("model"), py::arg("seq"));
  m.def(
      "class_bigram_objective",
      [](const BigramModel& model, const std::vector<int>& class_of,
         int num_classes) {
        ClassMap classes;
        classes.class_of = class_of;
        classes.num_classes = num_classes;
        return class_bigram_objective(model, classes);
      },
      py::arg("model"), py::arg("class_of"), py::arg("num_classes"));
  m.def(
      "greedy_exchange",
      [](const BigramModel& model, int num_classes, std::uint64_t seed) {
        return greedy_exchange(model, num_classes, seed).class_of;
      },
      py::arg("model"), py::arg("num_classes"), py::arg("seed"));

  // topics
  m.def(
      "fit_lda",
      [](const std::vector<std::vector<std::string>>& docs, int topics,
         double alpha, double beta, int sweeps, std::uint64_t seed) {
        const Corpus corpus = build_corpus(to_docs(docs));
        LdaConfig cfg;
        cfg.topics = topics;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.sweeps = sweeps;
        cfg.seed = seed;
        cfg.validate();
        LdaState state = init_state(corpus, cfg);
        run_gibbs(state, corpus, cfg);
        const LdaPosterior post = posterior(state, cfg);
        py::dict out;
        out["vocab"] = corpus.vocab;
        out["theta"] = post.theta;
        out["phi"] = post.phi;
        return out;
      },
      py::arg("docs"), py::arg("topics"), py::arg("alpha") = -1.0,
      py::arg("beta") = 0.01, py::arg("sweeps") = 200, py::arg("seed") = 1);
  m.def(
      "select_topic_count",
      [](const std::vector<std::vector<std::string>>& docs,
         const std::vector<int>& k_grid, int sweeps, std::uint64_t seed) {
        const Corpus corpus = build_corpus(to_docs(docs));
        LdaConfig tmpl;
        tmpl.sweeps = sweeps;
        tmpl.seed = seed;
        const TopicSelection sel = select_topic_count(corpus, k_grid, tmpl);
        return py::make_tuple(sel.best_k, sel.coherence_by_k);
      },
      py::arg("docs"), py::arg("k_grid"), py::arg("sweeps") = 200,
      py::arg("seed") = 1);

  // mention graph
  py::class_<MentionGraph>(m, "MentionGraph")
      .def_property_readonly("nodes",
                             [](const MentionGraph& g) { return g.nodes; })
      .def("node_count", &MentionGraph::node_count)
      .def("edge_count", &MentionGraph::edge_count)
      .def("adjacency", &MentionGraph::adjacency);
  m.def(
      "make_graph",
      [](const std::vector<std::string>& handles,
         const std::vector<std::tuple<std::string, std::string, double>>& edges) {
        return make_graph(handles, edges);
      },
      py::arg("handles"), py::arg("edges"));
  m.def(
      "weak_components",
      [](const MentionGraph& g) { return weak_components(g).label; },
      py::arg("graph"));
  m.def(
      "detect_communities",
      [](const MentionGraph& g, const std::string& method, double resolution,
         std::uint64_t seed, double attenuation) {
        const CommunityMethod m2 = method == "pathweight"
                                       ? CommunityMethod::pathweight
                                       : CommunityMethod::modularity;
        return detect_communities(g, m2, resolution, seed, attenuation).label;
      },
      py::arg("graph"), py::arg("method") = "modularity",
      py::arg("resolution") = 1.0, py::arg("seed") = 1,
      py::arg("attenuation") = 0.0);
  m.def("density", &density, py::arg("graph"));
  m.def("average_degree", &average_degree, py::arg("graph"));
  m.def("diameter", &diameter, py::arg("graph"));
  m.def("path_weight_matrix", &path_weight_matrix, py::arg("adjacency"),
        py::arg("attenuation"));
  m.def("spectral_radius", &spectral_radius, py::arg("matrix"));

  // pipeline
  m.def(
      "run_pipeline",
      [](const std::string& input, const std::string& lexicon,
         const std::string& out_dir, std::uint64_t seed,
         const std::map<std::string, std::string>& overrides) {
        PipelineConfig cfg;
        cfg.input_path = input;
        cfg.lexicon_path = lexicon;
        cfg.out_dir = out_dir;
        cfg.seed = seed;
        for (const auto& [key, value] : overrides)
          apply_config_line(cfg, key, value);
        cfg.validate();
        const RunManifest manifest = run_pipeline(cfg);
        std::map<std::string, std::string> out;
        for (const auto& e : manifest.entries) out[e.name] = e.digest;
        return out;
      },
      py::arg("input"), py::arg("lexicon"), py::arg("out_dir"),
      py::arg("seed") = 1,
      py::arg("overrides") = std::map<std::string, std::string>{});

  py::register_exception<UnseenTransitionError>(m, "UnseenTransitionError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<ConfigError>(m, "ConfigError");
}
