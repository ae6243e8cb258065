#include "crisisnet/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "crisisnet/geo.hpp"
#include "crisisnet/ingest.hpp"
#include "crisisnet/ngrams.hpp"
#include "crisisnet/sentiment.hpp"
#include "crisisnet/textprep.hpp"
#include "crisisnet/topics.hpp"

namespace fs = std::filesystem;

namespace crisisnet {

void PipelineConfig::validate() const {
  auto require_file = [](const std::string& path, const char* field) {
    if (path.empty())
      throw ConfigError(std::string(field) + " is required");
    if (!fs::exists(path))
      throw ConfigError(std::string(field) + " does not exist: " + path);
  };
  require_file(input_path, "input");
  require_file(lexicon_path, "lexicon");
  if (!stoplist_path.empty() && !fs::exists(stoplist_path))
    throw ConfigError("stoplist does not exist: " + stoplist_path);
  if (!regions_path.empty() && !fs::exists(regions_path))
    throw ConfigError("regions does not exist: " + regions_path);
  if (!agency_path.empty() && !fs::exists(agency_path))
    throw ConfigError("agency does not exist: " + agency_path);
  if (lda_k_grid.empty()) throw ConfigError("lda.k_grid is empty");
  for (int k : lda_k_grid)
    if (k < 1) throw ConfigError("lda.k_grid entries must be >= 1");
  if (lda_beta <= 0) throw ConfigError("lda.beta must be > 0");
  if (lda_sweeps < 1) throw ConfigError("lda.sweeps must be >= 1");
  if (community_method != "modularity" && community_method != "pathweight")
    throw ConfigError("community.method must be modularity or pathweight");
  if (resolution <= 0) throw ConfigError("community.resolution must be > 0");
  if (top_terms < 1 || heatmap_terms < 1 || bigram_top_k < 1 ||
      top_nodes < 1 || topic_words < 1)
    throw ConfigError("report counts must be >= 1");
  if (out_dir.empty()) throw ConfigError("out is required");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  std::string v = trim(s);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string> parse_array(const std::string& value) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError("expected an array: " + value);
  v = v.substr(1, v.size() - 2);
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = unquote(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

long to_int(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    long v = std::stol(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + value);
  }
}

double to_double(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(trim(value), &pos);
    if (pos != trim(value).size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + value);
  }
}

}  // namespace

void apply_config_line(PipelineConfig& cfg, const std::string& dotted_key,
                       const std::string& value) {
  const std::string key = trim(dotted_key);
  if (key == "input") {
    cfg.input_path = unquote(value);
  } else if (key == "keywords") {
    cfg.keywords = parse_array(value);
  } else if (key == "stoplist") {
    cfg.stoplist_path = unquote(value);
  } else if (key == "lexicon") {
    cfg.lexicon_path = unquote(value);
  } else if (key == "regions") {
    cfg.regions_path = unquote(value);
  } else if (key == "agency") {
    cfg.agency_path = unquote(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
  } else if (key == "out") {
    cfg.out_dir = unquote(value);
  } else if (key == "lda.k_grid") {
    cfg.lda_k_grid.clear();
    for (const auto& item : parse_array(value))
      cfg.lda_k_grid.push_back(static_cast<int>(to_int(item, key)));
  } else if (key == "lda.alpha") {
    cfg.lda_alpha = to_double(value, key);
  } else if (key == "lda.beta") {
    cfg.lda_beta = to_double(value, key);
  } else if (key == "lda.sweeps") {
    cfg.lda_sweeps = static_cast<int>(to_int(value, key));
  } else if (key == "community.method") {
    cfg.community_method = unquote(value);
  } else if (key == "community.resolution") {
    cfg.resolution = to_double(value, key);
  } else if (key == "community.attenuation") {
    cfg.attenuation = to_double(value, key);
  } else if (key == "report.top_terms") {
    cfg.top_terms = static_cast<int>(to_int(value, key));
  } else if (key == "report.heatmap_terms") {
    cfg.heatmap_terms = static_cast<int>(to_int(value, key));
  } else if (key == "report.bigram_top_k") {
    cfg.bigram_top_k = static_cast<int>(to_int(value, key));
  } else if (key == "report.top_nodes") {
    cfg.top_nodes = static_cast<int>(to_int(value, key));
  } else if (key == "report.topic_words") {
    cfg.topic_words = static_cast<int>(to_int(value, key));
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  PipelineConfig cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' || line[i] == '\'') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line.erase(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("bad config line " + std::to_string(lineno) + ": " +
                        line);
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    apply_config_line(cfg, key, line.substr(eq + 1));
  }
  return cfg;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

namespace {

// Tracks written files so a failed run leaves nothing behind.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {
    created_dir_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return dir_ + "/" + name; }

  void write(const std::string& name, const std::string& content) {
    const std::string p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed: " + p);
    names_.push_back(name);
  }

  void remove_all() {
    std::error_code ec;
    for (const auto& n : names_) fs::remove(path(n), ec);
    // drop the directory too, but only if this run created it
    if (created_dir_) fs::remove(dir_, ec);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::string dir_;
  bool created_dir_ = false;
  std::vector<std::string> names_;
};

struct StageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw StageError(std::string("[") + name + "] " + e.what());
  }
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  OutputSet out(cfg.out_dir);
  try {
    // ingest
    LoadResult loaded = stage("ingest", [&] { return load_archive(cfg.input_path); });
    CorpusStats stats = loaded.stats;
    std::vector<Tweet> tweets = dedupe(std::move(loaded.tweets), &stats);
    std::set<std::string> keywords(cfg.keywords.begin(), cfg.keywords.end());
    if (keywords.empty()) keywords = kDefaultKeywords;
    tweets = stage("ingest", [&] {
      return relevance_filter(tweets, keywords, &stats);
    });
    stats.unique_users = count_unique_users(tweets);

    RegionSet regions;
    if (!cfg.regions_path.empty())
      regions = stage("ingest",
                      [&] { return RegionSet::load_geojson(cfg.regions_path); });
    for (auto& t : tweets) {
      if (t.bbox && bbox_usable(*t.bbox)) t.centroid = bbox_centroid(*t.bbox);
      t.region = (t.centroid && !regions.empty()) ? regions.assign(*t.centroid)
                                                  : kUnassignedRegion;
    }

    {
      std::ostringstream corpus_out, stats_out;
      write_corpus_jsonl(corpus_out, tweets);
      write_stats(stats_out, stats, tweets.size());
      out.write("corpus.jsonl", corpus_out.str());
      out.write("stats.txt", stats_out.str());
    }

    // textprep
    const std::unordered_set<std::string> stoplist =
        cfg.stoplist_path.empty() ? default_stoplist()
                                  : load_stoplist(cfg.stoplist_path);
    const std::vector<Document> docs =
        stage("textprep", [&] { return make_documents(tweets, stoplist); });

    // sentiment
    stage("sentiment", [&] {
      const Lexicon lex = load_lexicon(cfg.lexicon_path);
      std::ostringstream csv;
      write_sentiment_csv(csv, sentiment_timeseries(docs, lex));
      out.write("sentiment.csv", csv.str());
      return 0;
    });

    // ngrams
    const BigramModel bigrams = fit_bigrams(docs);
    stage("ngrams", [&] {
      const auto ranked = top_terms(docs, cfg.top_terms);
      std::ostringstream terms_csv;
      write_top_terms_csv(terms_csv, ranked);
      out.write("top_terms.csv", terms_csv.str());

      std::vector<std::string> heat_terms;
      for (std::size_t i = 0;
           i < ranked.size() && i < static_cast<std::size_t>(cfg.heatmap_terms);
           ++i) {
        heat_terms.push_back(ranked[i].term);
      }
      std::ostringstream heat_csv;
      if (!heat_terms.empty())
        write_term_time_csv(heat_csv, term_time_matrix(docs, heat_terms));
      else
        heat_csv << "term\n";
      out.write("term_heatmap.csv", heat_csv.str());

      const auto edges = bigram_graph_edges(bigrams, cfg.bigram_top_k);
      std::vector<std::tuple<std::string, std::string, double>> tuples;
      for (const auto& e : edges) tuples.emplace_back(e.source, e.target, e.weight);
      const MentionGraph bg = make_graph({}, tuples);
      std::ostringstream edge_csv, gexf;
      export_csv(edge_csv, bg);
      export_gexf(gexf, bg);
      out.write("bigram_edges.csv", edge_csv.str());
      out.write("bigram_graph.gexf", gexf.str());
      return 0;
    });

    // netgraph
    MentionGraph graph = stage("netgraph", [&] { return build_mention_graph(tweets); });
    if (!cfg.agency_path.empty())
      stage("netgraph", [&] { load_agency_types(graph, cfg.agency_path); return 0; });

    Partition components{PartitionKind::component, {}, 0};
    Partition subgraph_communities{PartitionKind::community, {}, 0};
    MentionGraph subgraph;
    std::vector<GroupMetrics> metric_rows;
    stage("netgraph", [&] {
      const CommunityMethod method = cfg.community_method == "pathweight"
                                         ? CommunityMethod::pathweight
                                         : CommunityMethod::modularity;
      if (graph.node_count() > 0) {
        components = weak_components(graph);
        subgraph = induced_subgraph(graph, components, largest_group(components));
        subgraph_communities = detect_communities(
            subgraph, method, cfg.resolution, cfg.seed, cfg.attenuation);
        metric_rows = partition_metrics(graph, components);
        auto community_rows = partition_metrics(subgraph, subgraph_communities);
        metric_rows.insert(metric_rows.end(), community_rows.begin(),
                           community_rows.end());
      }
      std::ostringstream metrics_csv;
      write_metrics_csv(metrics_csv, metric_rows);
      out.write("graph_metrics.csv", metrics_csv.str());

      // community labels lifted to the full graph; 0 = outside the largest
      // component
      Partition full_comm{PartitionKind::community,
                          std::vector<int>(graph.node_count(), -1),
                          subgraph_communities.num_groups};
      for (std::size_t i = 0; i < subgraph.node_count(); ++i) {
        full_comm.label[graph.index.at(subgraph.nodes[i])] =
            subgraph_communities.label[i];
      }
      std::ostringstream gexf;
      export_gexf(gexf, graph,
                  graph.node_count() ? &components : nullptr,
                  graph.node_count() ? &full_comm : nullptr);
      out.write("graph.gexf", gexf.str());

      std::ostringstream nodes_csv;
      nodes_csv << "community,rank,handle,degree\n";
      if (subgraph.node_count() > 0) {
        const auto ranked = top_nodes(subgraph, subgraph_communities, cfg.top_nodes);
        for (std::size_t c = 0; c < ranked.size(); ++c) {
          for (std::size_t r = 0; r < ranked[c].size(); ++r) {
            nodes_csv << (c + 1) << ',' << (r + 1) << ',' << ranked[c][r].first
                      << ',' << ranked[c][r].second << "\n";
          }
        }
      }
      out.write("top_nodes.csv", nodes_csv.str());
      return 0;
    });

    // topics, per community of the largest component (membership by author)
    stage("topics", [&] {
      std::ostringstream topics_csv, coherence_csv;
      topics_csv << "community,topic,rank,word,probability\n";
      coherence_csv << "community,K,mean_coherence\n";
      for (int c = 0; c < subgraph_communities.num_groups; ++c) {
        std::unordered_set<std::string> members;
        for (std::size_t i = 0; i < subgraph.node_count(); ++i)
          if (subgraph_communities.label[i] == c) members.insert(subgraph.nodes[i]);
        std::vector<Document> community_docs;
        for (std::size_t i = 0; i < tweets.size(); ++i)
          if (members.count(tweets[i].author_handle))
            community_docs.push_back(docs[i]);
        const Corpus corpus = build_corpus(community_docs);
        if (corpus.vocab.size() < 2 || corpus.total_tokens() < 2) continue;

        LdaConfig tmpl;
        tmpl.alpha = cfg.lda_alpha;
        tmpl.beta = cfg.lda_beta;
        tmpl.sweeps = cfg.lda_sweeps;
        tmpl.seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(c);
        std::vector<int> grid;
        for (int k : cfg.lda_k_grid)
          if (k >= 1) grid.push_back(k);
        const TopicSelection sel = select_topic_count(corpus, grid, tmpl);
        for (const auto& [k, coh] : sel.coherence_by_k) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.6f", coh);
          coherence_csv << (c + 1) << ',' << k << ',' << buf << "\n";
        }
        LdaConfig best = tmpl;
        best.topics = sel.best_k;
        best.seed = tmpl.seed + static_cast<std::uint64_t>(sel.best_k);
        LdaState state = init_state(corpus, best);
        run_gibbs(state, corpus, best);
        const LdaPosterior post = posterior(state, best);
        for (int t = 0; t < best.topics; ++t) {
          write_topic_report_row(topics_csv, c + 1, t + 1,
                                 top_words(post.phi, t, corpus, cfg.topic_words));
        }
      }
      out.write("topics.csv", topics_csv.str());
      out.write("coherence.csv", coherence_csv.str());
      return 0;
    });

    RunManifest manifest;
    manifest.out_dir = cfg.out_dir;
    for (const auto& name : out.names())
      manifest.entries.push_back({name, digest_file(out.path(name))});
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                return a.name < b.name;
              });
    write_manifest(manifest);
    return manifest;
  } catch (...) {
    out.remove_all();
    throw;
  }
}

void write_manifest(const RunManifest& manifest) {
  const std::string path = manifest.out_dir + "/manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  for (const auto& e : manifest.entries) out << e.name << ' ' << e.digest << "\n";
}

RunManifest read_manifest(const std::string& out_dir) {
  const std::string path = out_dir + "/manifest.txt";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  RunManifest m;
  m.out_dir = out_dir;
  std::string name, digest;
  while (in >> name >> digest) m.entries.push_back({name, digest});
  return m;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing manifest entry file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// CSV body (after the header) rendered as a Markdown table.
std::string csv_to_markdown(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::ostringstream out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << "| ";
    for (char c : line) {
      if (c == ',')
        out << " | ";
      else
        out << c;
    }
    out << " |\n";
    if (header) {
      header = false;
      std::size_t cols = std::count(line.begin(), line.end(), ',') + 1;
      out << "|";
      for (std::size_t i = 0; i < cols; ++i) out << " --- |";
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::string report(const RunManifest& manifest) {
  const std::vector<std::string> required = {
      "stats.txt",      "sentiment.csv",    "top_terms.csv",
      "graph_metrics.csv", "top_nodes.csv", "topics.csv"};
  std::vector<std::string> missing;
  auto has = [&](const std::string& name) {
    return std::any_of(manifest.entries.begin(), manifest.entries.end(),
                       [&](const ManifestEntry& e) { return e.name == name; });
  };
  for (const auto& name : required)
    if (!has(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::string msg = "manifest is missing:";
    for (const auto& m : missing) msg += " " + m;
    throw std::runtime_error(msg);
  }

  std::ostringstream md;
  md << "# Crisis Communication Run Report\n\n";

  md << "## Corpus\n\n```\n"
     << slurp(manifest.out_dir + "/stats.txt") << "```\n\n";

  md << "## Daily sentiment\n\n"
     << csv_to_markdown(slurp(manifest.out_dir + "/sentiment.csv")) << "\n";

  md << "## Top terms\n\n"
     << csv_to_markdown(slurp(manifest.out_dir + "/top_terms.csv")) << "\n";

  md << "## Network metrics\n\n"
     << csv_to_markdown(slurp(manifest.out_dir + "/graph_metrics.csv")) << "\n";

  md << "## Top nodes per community\n\n"
     << csv_to_markdown(slurp(manifest.out_dir + "/top_nodes.csv")) << "\n";

  md << "## Topics per community\n\n"
     << csv_to_markdown(slurp(manifest.out_dir + "/topics.csv")) << "\n";

  return md.str();
}

}  // namespace crisisnet
