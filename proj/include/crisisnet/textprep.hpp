#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "crisisnet/tweet.hpp"

namespace crisisnet {

struct Document {
  std::string tweet_id;
  std::vector<std::string> tokens;
  Day day = 0;
};

// Strips URLs, HTML tags and entities, emoji/symbol codepoints and control
// characters; lowercases; drops '@'/'#' markers keeping the bare word;
// strips edge punctuation per word; collapses whitespace. Idempotent.
std::string normalize(const std::string& text);

// Whitespace split of normalized text; trims edge non-alphanumerics, drops
// empties and single-digit tokens.
std::vector<std::string> tokenize(const std::string& text);

// Order-preserving removal of exact stoplist matches.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stoplist);

// One token per line, '#' comments allowed. Throws std::runtime_error on I/O
// failure.
std::unordered_set<std::string> load_stoplist(const std::string& path);

// ~175 common English function words.
const std::unordered_set<std::string>& default_stoplist();

Document make_document(const Tweet& tweet,
                       const std::unordered_set<std::string>& stoplist);

std::vector<Document> make_documents(const std::vector<Tweet>& tweets,
                                     const std::unordered_set<std::string>& stoplist);

}  // namespace crisisnet
