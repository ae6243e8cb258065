#include "crisisnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "crisisnet/textprep.hpp"

namespace crisisnet {

using nlohmann::json;

namespace {

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

std::vector<std::string> finalize_mentions(std::vector<std::string> raw,
                                           const std::string& author_handle) {
  const std::string self = lower(author_handle);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& h : raw) {
    if (!h.empty() && h[0] == '@') h.erase(0, 1);
    h = lower(h);
    if (h.empty() || h == self || !seen.insert(h).second) continue;
    out.push_back(h);
  }
  return out;
}

}  // namespace

std::vector<std::string> extract_mentions(const std::string& text,
                                          const std::string& author_handle) {
  std::vector<std::string> raw;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '@') continue;
    std::size_t j = i + 1;
    while (j < text.size() && j - i <= 15 && is_handle_char(text[j])) ++j;
    if (j > i + 1) raw.push_back(text.substr(i + 1, j - i - 1));
    i = j - 1;
  }
  return finalize_mentions(std::move(raw), author_handle);
}

namespace {

// One JSON object per line; throws json::exception or std::invalid_argument
// on anything that does not fit the schema.
Tweet parse_tweet_line(const std::string& line) {
  json j = json::parse(line);
  Tweet t;
  t.id = j.at("id").get<std::string>();
  if (t.id.empty()) throw std::invalid_argument("empty id");
  t.author_id = j.value("author_id", std::string{});
  t.author_handle = lower(j.at("author_handle").get<std::string>());
  if (!t.author_handle.empty() && t.author_handle[0] == '@')
    t.author_handle.erase(0, 1);
  t.text = j.at("text").get<std::string>();
  t.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
  if (j.contains("place_name") && j["place_name"].is_string())
    t.place_name = j["place_name"].get<std::string>();

  if (j.contains("geo") && j["geo"].is_object() && j["geo"].contains("bbox")) {
    const auto& arr = j["geo"]["bbox"];
    if (!arr.is_array() || arr.size() != 8)
      throw std::invalid_argument("bbox must hold 8 numbers");
    BBox box;
    for (int k = 0; k < 4; ++k) {
      box[k].lon = arr[2 * k].get<double>();
      box[k].lat = arr[2 * k + 1].get<double>();
      if (!box[k].valid()) throw std::invalid_argument("bbox out of range");
    }
    t.bbox = box;
  }

  if (j.contains("entities") && j["entities"].is_object() &&
      j["entities"].contains("mentions")) {
    std::vector<std::string> raw =
        j["entities"]["mentions"].get<std::vector<std::string>>();
    t.mentions = finalize_mentions(std::move(raw), t.author_handle);
  } else {
    t.mentions = extract_mentions(t.text, t.author_handle);
  }
  return t;
}

}  // namespace

LoadResult load_archive(std::istream& in) {
  LoadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.tweets.push_back(parse_tweet_line(line));
      ++result.stats.total_loaded;
    } catch (const std::exception&) {
      ++result.stats.malformed_skipped;
    }
  }
  result.stats.unique_users = count_unique_users(result.tweets);
  return result;
}

LoadResult load_archive(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open archive: " + path);
  return load_archive(in);
}

std::vector<Tweet> dedupe(std::vector<Tweet> tweets, CorpusStats* stats) {
  std::vector<Tweet> out;
  out.reserve(tweets.size());
  std::unordered_set<std::string> seen;
  for (auto& t : tweets) {
    if (seen.insert(t.id).second) {
      out.push_back(std::move(t));
    } else if (stats) {
      ++stats->duplicates_dropped;
    }
  }
  return out;
}

const std::set<std::string> kDefaultKeywords = {
    "hurricane", "laura", "storm", "evacuation", "surge", "landfall"};

std::vector<Tweet> relevance_filter(const std::vector<Tweet>& tweets,
                                    const std::set<std::string>& keywords,
                                    CorpusStats* stats) {
  if (keywords.empty())
    throw std::invalid_argument("relevance keyword set is empty");
  std::vector<Tweet> out;
  for (const auto& t : tweets) {
    bool hit = false;
    for (const auto& token : tokenize(normalize(t.text))) {
      if (keywords.count(token)) {
        hit = true;
        break;
      }
    }
    if (hit) {
      out.push_back(t);
    } else if (stats) {
      ++stats->irrelevant_dropped;
    }
  }
  return out;
}

GeoPoint bbox_centroid(const BBox& bbox) {
  GeoPoint c;
  for (const auto& p : bbox) {
    c.lon += p.lon / 4.0;
    c.lat += p.lat / 4.0;
  }
  return c;
}

std::optional<GeoPoint> bbox_centroid(const std::optional<BBox>& bbox) {
  if (!bbox) return std::nullopt;
  return bbox_centroid(*bbox);
}

bool bbox_usable(const BBox& bbox) {
  double min_lon = bbox[0].lon, max_lon = bbox[0].lon;
  for (const auto& p : bbox) {
    if (!p.valid()) return false;
    min_lon = std::min(min_lon, p.lon);
    max_lon = std::max(max_lon, p.lon);
  }
  // A box wider than a hemisphere is read as antimeridian-crossing.
  return max_lon - min_lon <= 180.0;
}

std::vector<std::pair<Day, std::size_t>> bucket_counts(
    const std::vector<Tweet>& tweets) {
  if (tweets.empty()) return {};
  std::map<Day, std::size_t> counts;
  Day lo = tweets.front().day(), hi = lo;
  for (const auto& t : tweets) {
    Day d = t.day();
    ++counts[d];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  std::vector<std::pair<Day, std::size_t>> out;
  for (Day d = lo; d <= hi; ++d) out.emplace_back(d, counts.count(d) ? counts[d] : 0);
  return out;
}

std::size_t count_unique_users(const std::vector<Tweet>& tweets) {
  std::unordered_set<std::string> users;
  for (const auto& t : tweets) users.insert(t.author_handle);
  return users.size();
}

void write_corpus_jsonl(std::ostream& out, const std::vector<Tweet>& tweets) {
  for (const auto& t : tweets) {
    json j;
    j["id"] = t.id;
    j["author_id"] = t.author_id;
    j["author_handle"] = t.author_handle;
    j["text"] = t.text;
    {
      Timestamp ts = t.created_at;
      Day d = day_of(ts);
      std::int64_t sec = ts - static_cast<std::int64_t>(d) * 86400;
      char buf[32];
      std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ",
                    static_cast<int>(sec / 3600),
                    static_cast<int>((sec / 60) % 60),
                    static_cast<int>(sec % 60));
      j["created_at"] = iso_date(d) + buf;
    }
    if (t.place_name) j["place_name"] = *t.place_name;
    if (t.bbox) {
      std::vector<double> arr;
      for (const auto& p : *t.bbox) {
        arr.push_back(p.lon);
        arr.push_back(p.lat);
      }
      j["geo"]["bbox"] = arr;
    }
    j["entities"]["mentions"] = t.mentions;
    if (t.centroid) {
      j["centroid_lon"] = t.centroid->lon;
      j["centroid_lat"] = t.centroid->lat;
    }
    if (!t.region.empty()) j["region"] = t.region;
    out << j.dump() << "\n";
  }
}

void write_stats(std::ostream& out, const CorpusStats& stats, std::size_t kept) {
  out << "total_loaded=" << stats.total_loaded << "\n"
      << "duplicates_dropped=" << stats.duplicates_dropped << "\n"
      << "irrelevant_dropped=" << stats.irrelevant_dropped << "\n"
      << "malformed_skipped=" << stats.malformed_skipped << "\n"
      << "kept=" << kept << "\n"
      << "unique_users=" << stats.unique_users << "\n";
}

}  // namespace crisisnet
