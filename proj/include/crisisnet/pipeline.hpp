#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crisisnet/graph.hpp"

namespace crisisnet {

struct PipelineConfig {
  std::string input_path;
  std::vector<std::string> keywords;  // empty -> shipped default list
  std::string stoplist_path;          // empty -> shipped default list
  std::string lexicon_path;
  std::string regions_path;           // optional
  std::string agency_path;            // optional

  std::vector<int> lda_k_grid = {2, 3, 4, 5};
  double lda_alpha = -1.0;  // < 0 -> 50/K
  double lda_beta = 0.01;
  int lda_sweeps = 200;
  std::uint64_t seed = 1;

  std::string community_method = "modularity";  // or "pathweight"
  double resolution = 1.0;
  double attenuation = 0.0;  // <= 0 -> 0.5/rho(A)

  int top_terms = 100;
  int heatmap_terms = 50;
  int bigram_top_k = 50;
  int top_nodes = 5;
  int topic_words = 5;

  std::string out_dir = "out";

  void validate() const;  // throws ConfigError with the offending field
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal TOML subset: [section] headers, key = value with strings, numbers,
// booleans and flat arrays. Dotted names match PipelineConfig fields
// (e.g. lda.sweeps, community.method).
PipelineConfig load_config(const std::string& path);
void apply_config_line(PipelineConfig& cfg, const std::string& dotted_key,
                       const std::string& value);

struct ManifestEntry {
  std::string name;    // file name inside out_dir
  std::string digest;  // fnv1a64 hex of file content
};

struct RunManifest {
  std::string out_dir;
  std::vector<ManifestEntry> entries;
};

std::string digest_file(const std::string& path);

// Full pipeline: ingest -> textprep -> {sentiment, ngrams} -> netgraph ->
// per-community topics. Writes every artifact plus manifest.txt; on failure
// removes partial outputs and rethrows with a stage tag.
RunManifest run_pipeline(const PipelineConfig& cfg);

RunManifest read_manifest(const std::string& out_dir);
void write_manifest(const RunManifest& manifest);

// Markdown summary derived from the manifest files alone.
std::string report(const RunManifest& manifest);

}  // namespace crisisnet
