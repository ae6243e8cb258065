#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "crisisnet/geo.hpp"
#include "crisisnet/ingest.hpp"
#include "crisisnet/ngrams.hpp"
#include "crisisnet/pipeline.hpp"
#include "crisisnet/sentiment.hpp"
#include "crisisnet/textprep.hpp"
#include "crisisnet/topics.hpp"

namespace fs = std::filesystem;
using namespace crisisnet;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  long seed = -1;
  std::vector<std::string> overrides;  // key=value
};

PipelineConfig resolve_config(const CliOptions& opts) {
  PipelineConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must look like key=value: " + kv);
    apply_config_line(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  return cfg;
}

void require(const std::string& path, const char* field) {
  if (path.empty()) throw ConfigError(std::string(field) + " is required");
  if (!fs::exists(path))
    throw ConfigError(std::string(field) + " does not exist: " + path);
}

struct Prepared {
  std::vector<Tweet> tweets;
  CorpusStats stats;
};

Prepared ingest_tweets(const PipelineConfig& cfg) {
  require(cfg.input_path, "input");
  LoadResult loaded = load_archive(cfg.input_path);
  Prepared p;
  p.stats = loaded.stats;
  p.tweets = dedupe(std::move(loaded.tweets), &p.stats);
  std::set<std::string> keywords(cfg.keywords.begin(), cfg.keywords.end());
  if (keywords.empty()) keywords = kDefaultKeywords;
  p.tweets = relevance_filter(p.tweets, keywords, &p.stats);
  p.stats.unique_users = count_unique_users(p.tweets);

  RegionSet regions;
  if (!cfg.regions_path.empty())
    regions = RegionSet::load_geojson(cfg.regions_path);
  for (auto& t : p.tweets) {
    if (t.bbox && bbox_usable(*t.bbox)) t.centroid = bbox_centroid(*t.bbox);
    t.region = (t.centroid && !regions.empty()) ? regions.assign(*t.centroid)
                                                : kUnassignedRegion;
  }
  return p;
}

std::vector<Document> prepare_documents(const PipelineConfig& cfg,
                                        const std::vector<Tweet>& tweets) {
  const auto stoplist = cfg.stoplist_path.empty()
                            ? default_stoplist()
                            : load_stoplist(cfg.stoplist_path);
  return make_documents(tweets, stoplist);
}

void write_file(const PipelineConfig& cfg, const std::string& name,
                const std::string& content) {
  fs::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  std::cout << "wrote " << path << "\n";
}

int cmd_ingest(const PipelineConfig& cfg) {
  Prepared p = ingest_tweets(cfg);
  std::ostringstream corpus, stats;
  write_corpus_jsonl(corpus, p.tweets);
  write_stats(stats, p.stats, p.tweets.size());
  write_file(cfg, "corpus.jsonl", corpus.str());
  write_file(cfg, "stats.txt", stats.str());
  return 0;
}

int cmd_sentiment(const PipelineConfig& cfg) {
  require(cfg.lexicon_path, "lexicon");
  Prepared p = ingest_tweets(cfg);
  const auto docs = prepare_documents(cfg, p.tweets);
  const Lexicon lex = load_lexicon(cfg.lexicon_path);
  std::ostringstream csv;
  write_sentiment_csv(csv, sentiment_timeseries(docs, lex));
  write_file(cfg, "sentiment.csv", csv.str());
  return 0;
}

int cmd_heatmap(const PipelineConfig& cfg) {
  Prepared p = ingest_tweets(cfg);
  const auto docs = prepare_documents(cfg, p.tweets);
  const auto ranked = top_terms(docs, cfg.top_terms);
  std::ostringstream terms_csv;
  write_top_terms_csv(terms_csv, ranked);
  write_file(cfg, "top_terms.csv", terms_csv.str());
  std::vector<std::string> heat_terms;
  for (std::size_t i = 0;
       i < ranked.size() && i < static_cast<std::size_t>(cfg.heatmap_terms); ++i)
    heat_terms.push_back(ranked[i].term);
  std::ostringstream heat_csv;
  if (!heat_terms.empty())
    write_term_time_csv(heat_csv, term_time_matrix(docs, heat_terms));
  else
    heat_csv << "term\n";
  write_file(cfg, "term_heatmap.csv", heat_csv.str());
  return 0;
}

int cmd_bigrams(const PipelineConfig& cfg) {
  Prepared p = ingest_tweets(cfg);
  const auto docs = prepare_documents(cfg, p.tweets);
  const BigramModel model = fit_bigrams(docs);
  const auto edges = bigram_graph_edges(model, cfg.bigram_top_k);
  std::vector<std::tuple<std::string, std::string, double>> tuples;
  for (const auto& e : edges) tuples.emplace_back(e.source, e.target, e.weight);
  const MentionGraph bg = make_graph({}, tuples);
  std::ostringstream csv, gexf;
  export_csv(csv, bg);
  export_gexf(gexf, bg);
  write_file(cfg, "bigram_edges.csv", csv.str());
  write_file(cfg, "bigram_graph.gexf", gexf.str());
  return 0;
}

int cmd_graph(const PipelineConfig& cfg) {
  Prepared p = ingest_tweets(cfg);
  MentionGraph graph = build_mention_graph(p.tweets);
  if (!cfg.agency_path.empty()) load_agency_types(graph, cfg.agency_path);
  std::ostringstream gexf, csv, metrics;
  if (graph.node_count() > 0) {
    const Partition components = weak_components(graph);
    const MentionGraph sub =
        induced_subgraph(graph, components, largest_group(components));
    const CommunityMethod method = cfg.community_method == "pathweight"
                                       ? CommunityMethod::pathweight
                                       : CommunityMethod::modularity;
    const Partition communities =
        detect_communities(sub, method, cfg.resolution, cfg.seed, cfg.attenuation);
    auto rows = partition_metrics(graph, components);
    auto community_rows = partition_metrics(sub, communities);
    rows.insert(rows.end(), community_rows.begin(), community_rows.end());
    write_metrics_csv(metrics, rows);
    export_gexf(gexf, graph, &components, nullptr);
  } else {
    write_metrics_csv(metrics, {});
    export_gexf(gexf, graph);
  }
  export_csv(csv, graph);
  write_file(cfg, "graph.gexf", gexf.str());
  write_file(cfg, "graph_edges.csv", csv.str());
  write_file(cfg, "graph_metrics.csv", metrics.str());
  return 0;
}

int cmd_topics(const PipelineConfig& cfg) {
  // Whole-corpus topic selection; community-level topics come from `run`.
  Prepared p = ingest_tweets(cfg);
  const auto docs = prepare_documents(cfg, p.tweets);
  const Corpus corpus = build_corpus(docs);
  if (corpus.vocab.size() < 2 || corpus.total_tokens() < 2)
    throw std::runtime_error("corpus too small for topic modeling");
  LdaConfig tmpl;
  tmpl.alpha = cfg.lda_alpha;
  tmpl.beta = cfg.lda_beta;
  tmpl.sweeps = cfg.lda_sweeps;
  tmpl.seed = cfg.seed;
  const TopicSelection sel = select_topic_count(corpus, cfg.lda_k_grid, tmpl);
  LdaConfig best = tmpl;
  best.topics = sel.best_k;
  best.seed = tmpl.seed + static_cast<std::uint64_t>(sel.best_k);
  LdaState state = init_state(corpus, best);
  run_gibbs(state, corpus, best);
  const LdaPosterior post = posterior(state, best);
  std::ostringstream topics_csv, coherence_csv;
  topics_csv << "community,topic,rank,word,probability\n";
  for (int t = 0; t < best.topics; ++t)
    write_topic_report_row(topics_csv, 0, t + 1,
                           top_words(post.phi, t, corpus, cfg.topic_words));
  write_coherence_csv(coherence_csv, sel.coherence_by_k);
  write_file(cfg, "topics.csv", topics_csv.str());
  write_file(cfg, "coherence.csv", coherence_csv.str());
  return 0;
}

int cmd_report(const PipelineConfig& cfg) {
  const RunManifest manifest = read_manifest(cfg.out_dir);
  const std::string md = report(manifest);
  write_file(cfg, "report.md", md);
  return 0;
}

int cmd_run(const PipelineConfig& cfg) {
  const RunManifest manifest = run_pipeline(cfg);
  for (const auto& e : manifest.entries)
    std::cout << e.name << ' ' << e.digest << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crisis-communication analytics for tweet archives"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CliOptions opts;
  app.add_option("--config", opts.config_path, "TOML config file");
  app.add_option("--seed", opts.seed, "RNG seed override");
  app.add_option("--out", opts.out_dir, "output directory override");
  app.add_option("--set", opts.overrides,
                 "config override, dotted key=value (repeatable)");

  int (*handler)(const PipelineConfig&) = nullptr;
  for (auto [name, desc, fn] :
       {std::tuple{"ingest", "load, dedupe, filter and geo-localize tweets",
                   &cmd_ingest},
        std::tuple{"sentiment", "daily sentiment-class time series",
                   &cmd_sentiment},
        std::tuple{"heatmap", "top terms and term-time heatmap matrix",
                   &cmd_heatmap},
        std::tuple{"bigrams", "bigram model and bigram network export",
                   &cmd_bigrams},
        std::tuple{"topics", "LDA topics with coherence-driven K selection",
                   &cmd_topics},
        std::tuple{"graph", "mention graph, components, communities, metrics",
                   &cmd_graph},
        std::tuple{"report", "Markdown summary from a run manifest",
                   &cmd_report},
        std::tuple{"run", "full pipeline, writes a digest manifest",
                   &cmd_run}}) {
    auto* sub = app.add_subcommand(name, desc);
    sub->callback([&handler, fn = fn] { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = resolve_config(opts);
    return handler(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
