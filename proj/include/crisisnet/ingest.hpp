#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crisisnet/tweet.hpp"

namespace crisisnet {

struct LoadResult {
  std::vector<Tweet> tweets;
  CorpusStats stats;
};

// Handles found in the text as @name (1-15 chars of [A-Za-z0-9_]), or taken
// from a structured mention list when the caller has one. Lowercased,
// self-mentions and duplicates dropped.
std::vector<std::string> extract_mentions(const std::string& text,
                                          const std::string& author_handle);

// Reads a JSONL archive. Malformed lines are skipped and counted, never
// fatal; an unreadable file throws std::runtime_error.
LoadResult load_archive(const std::string& path);
LoadResult load_archive(std::istream& in);

// First occurrence wins; drops are added to stats.duplicates_dropped.
std::vector<Tweet> dedupe(std::vector<Tweet> tweets, CorpusStats* stats = nullptr);

// Keeps tweets with at least one normalized token in `keywords` (exact,
// case-insensitive match). Empty keyword set throws std::invalid_argument.
std::vector<Tweet> relevance_filter(const std::vector<Tweet>& tweets,
                                    const std::set<std::string>& keywords,
                                    CorpusStats* stats = nullptr);

extern const std::set<std::string> kDefaultKeywords;

GeoPoint bbox_centroid(const BBox& bbox);
std::optional<GeoPoint> bbox_centroid(const std::optional<BBox>& bbox);

// Rejected boxes (antimeridian crossing, out-of-range corners).
bool bbox_usable(const BBox& bbox);

// Per-UTC-day tweet counts, zero-filled across [min day, max day].
std::vector<std::pair<Day, std::size_t>> bucket_counts(
    const std::vector<Tweet>& tweets);

std::size_t count_unique_users(const std::vector<Tweet>& tweets);

// Normalized corpus JSONL (input schema plus centroid_lon/centroid_lat/region).
void write_corpus_jsonl(std::ostream& out, const std::vector<Tweet>& tweets);
// Flat "key=value" stats block.
void write_stats(std::ostream& out, const CorpusStats& stats, std::size_t kept);

}  // namespace crisisnet
