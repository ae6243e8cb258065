#include "crisisnet/textprep.hpp"

#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crisisnet {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Emoji, symbol and pictograph ranges plus joiners/selectors; conservative
// over-stripping is fine for this corpus.
bool is_stripped_codepoint(std::uint32_t cp) {
  if (cp < 0x20 || cp == 0x7F) return true;                 // control
  if (cp >= 0x80 && cp <= 0x9F) return true;                // C1 control
  if (cp == 0x200D || cp == 0x20E3 || cp == 0xFE0E || cp == 0xFE0F)
    return true;                                            // ZWJ, keycap, VS
  if (cp >= 0x2190 && cp <= 0x2BFF) return true;            // arrows..misc symbols
  if (cp >= 0x3000 && cp <= 0x303F) return true;            // CJK symbols
  if (cp >= 0xD800 && cp <= 0xDFFF) return true;            // surrogates
  if (cp >= 0xE000 && cp <= 0xF8FF) return true;            // private use
  if (cp >= 0x1F000 && cp <= 0x1FBFF) return true;          // emoji planes
  if (cp >= 0xFFF0) return true;                            // specials and above
  return false;
}

// Decodes one UTF-8 codepoint at s[i]; advances i. Invalid bytes decode as
// U+FFFD (which gets stripped).
std::uint32_t decode_utf8(const std::string& s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  std::uint32_t cp = 0xFFFD;
  if (b0 < 0x80) {
    cp = b0;
  } else if ((b0 >> 5) == 0x6) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 >> 4) == 0xE) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 >> 3) == 0x1E) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b >> 6) != 0x2) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool starts_with_url(const std::string& s, std::size_t i) {
  static const char* prefixes[] = {"http://", "https://", "ftp://", "www."};
  for (const char* p : prefixes) {
    std::size_t n = std::strlen(p);
    if (s.compare(i, n, p) == 0) return true;
  }
  return false;
}

// Removes URLs, HTML tags and character entities from the raw byte string.
std::string strip_markup(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (starts_with_url(text, i)) {
      while (i < text.size() && !is_space(text[i])) ++i;
      out.push_back(' ');
      continue;
    }
    if (c == '<') {
      std::size_t close = text.find('>', i + 1);
      if (close != std::string::npos && close - i <= 128) {
        i = close + 1;
        out.push_back(' ');
        continue;
      }
    }
    if (c == '&') {
      std::size_t j = i + 1;
      while (j < text.size() && j - i <= 10 &&
             (is_ascii_alnum(text[j]) || text[j] == '#')) {
        ++j;
      }
      if (j < text.size() && text[j] == ';' && j > i + 1) {
        i = j + 1;
        out.push_back(' ');
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

}  // namespace

std::string normalize(const std::string& text) {
  const std::string stripped = strip_markup(text);

  // Codepoint pass: drop emoji/control, '@'/'#' markers, lowercase ASCII.
  std::string flat;
  flat.reserve(stripped.size());
  std::size_t i = 0;
  while (i < stripped.size()) {
    std::uint32_t cp = decode_utf8(stripped, i);
    if (cp == 0xFFFD || is_stripped_codepoint(cp)) {
      flat.push_back(' ');
      continue;
    }
    if (cp == '@' || cp == '#') continue;
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      flat.push_back(c);
    } else {
      encode_utf8(cp, flat);
    }
  }

  // Piece pass: strip edge punctuation, collapse whitespace.
  std::string out;
  std::istringstream pieces(flat);
  std::string piece;
  while (pieces >> piece) {
    std::size_t b = 0, e = piece.size();
    while (b < e && static_cast<unsigned char>(piece[b]) < 0x80 &&
           !is_ascii_alnum(piece[b]))
      ++b;
    while (e > b && static_cast<unsigned char>(piece[e - 1]) < 0x80 &&
           !is_ascii_alnum(piece[e - 1]))
      --e;
    if (b == e) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(piece, b, e - b);
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream pieces(text);
  std::string piece;
  while (pieces >> piece) {
    std::size_t b = 0, e = piece.size();
    while (b < e && static_cast<unsigned char>(piece[b]) < 0x80 &&
           !is_ascii_alnum(piece[b]))
      ++b;
    while (e > b && static_cast<unsigned char>(piece[e - 1]) < 0x80 &&
           !is_ascii_alnum(piece[e - 1]))
      --e;
    if (b == e) continue;
    std::string token = piece.substr(b, e - b);
    if (token.size() == 1 && token[0] >= '0' && token[0] <= '9') continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.count(t)) out.push_back(t);
  }
  return out;
}

std::unordered_set<std::string> load_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stoplist: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) words.insert(w);
  }
  return words;
}

const std::unordered_set<std::string>& default_stoplist() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "ain", "all", "am",
      "an", "and", "any", "are", "aren", "aren't", "as", "at", "be",
      "because", "been", "before", "being", "below", "between", "both", "but",
      "by", "can", "cannot", "could", "couldn", "couldn't", "d", "did",
      "didn", "didn't", "do", "does", "doesn", "doesn't", "doing", "don",
      "don't", "down", "during", "each", "few", "for", "from", "further",
      "had", "hadn", "hadn't", "has", "hasn", "hasn't", "have", "haven",
      "haven't", "having", "he", "her", "here", "hers", "herself", "him",
      "himself", "his", "how", "i", "if", "in", "into", "is", "isn", "isn't",
      "it", "it's", "its", "itself", "just", "ll", "m", "ma", "me", "mightn",
      "mightn't", "more", "most", "mustn", "mustn't", "my", "myself",
      "needn", "needn't", "no", "nor", "not", "now", "o", "of", "off", "on",
      "once", "only", "or", "other", "our", "ours", "ourselves", "out",
      "over", "own", "re", "s", "same", "shan", "shan't", "she", "she's",
      "should", "should've", "shouldn", "shouldn't", "so", "some", "such",
      "t", "than", "that", "that'll", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to", "too", "under", "until", "up", "ve", "very", "was",
      "wasn", "wasn't", "we", "were", "weren", "weren't", "what", "when",
      "where", "which", "while", "who", "whom", "why", "will", "with", "won",
      "won't", "would", "wouldn", "wouldn't", "y", "you", "you'd", "you'll",
      "you're", "you've", "your", "yours", "yourself", "yourselves"};
  return words;
}

Document make_document(const Tweet& tweet,
                       const std::unordered_set<std::string>& stoplist) {
  Document doc;
  doc.tweet_id = tweet.id;
  doc.day = tweet.day();
  doc.tokens = remove_stopwords(tokenize(normalize(tweet.text)), stoplist);
  return doc;
}

std::vector<Document> make_documents(
    const std::vector<Tweet>& tweets,
    const std::unordered_set<std::string>& stoplist) {
  std::vector<Document> docs;
  docs.reserve(tweets.size());
  for (const auto& t : tweets) docs.push_back(make_document(t, stoplist));
  return docs;
}

}  // namespace crisisnet
