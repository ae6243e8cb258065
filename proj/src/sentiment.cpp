#include "crisisnet/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crisisnet {

namespace {
constexpr double kNormalization = 15.0;
constexpr double kThreshold = 0.05;
}  // namespace

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               " has no tab: " + path);
    }
    std::string term = line.substr(0, tab);
    double valence = 0;
    try {
      valence = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               " has a bad valence: " + path);
    }
    if (!std::isfinite(valence)) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               " has a non-finite valence: " + path);
    }
    lex[term] = valence;
  }
  return lex;
}

const char* to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
    case SentimentLabel::positive: return "positive";
  }
  return "?";
}

double compound_score(const std::vector<std::string>& tokens,
                      const Lexicon& lex) {
  double s = 0.0;
  bool any = false;
  for (const auto& t : tokens) {
    auto it = lex.find(t);
    if (it != lex.end()) {
      s += it->second;
      any = true;
    }
  }
  if (!any) return 0.0;
  return s / std::sqrt(s * s + kNormalization);
}

SentimentLabel classify(double compound) {
  if (compound < -1.0 || compound > 1.0 || !std::isfinite(compound))
    throw std::invalid_argument("compound score out of [-1, 1]");
  if (compound >= kThreshold) return SentimentLabel::positive;
  if (compound <= -kThreshold) return SentimentLabel::negative;
  return SentimentLabel::neutral;
}

std::vector<std::pair<Day, DaySentiment>> sentiment_timeseries(
    const std::vector<Document>& docs, const Lexicon& lex) {
  if (docs.empty()) return {};
  std::map<Day, DaySentiment> by_day;
  Day lo = docs.front().day, hi = lo;
  for (const auto& doc : docs) {
    lo = std::min(lo, doc.day);
    hi = std::max(hi, doc.day);
    DaySentiment& slot = by_day[doc.day];
    switch (classify(compound_score(doc.tokens, lex))) {
      case SentimentLabel::negative: ++slot.negative; break;
      case SentimentLabel::neutral: ++slot.neutral; break;
      case SentimentLabel::positive: ++slot.positive; break;
    }
  }
  std::vector<std::pair<Day, DaySentiment>> out;
  for (Day d = lo; d <= hi; ++d) out.emplace_back(d, by_day[d]);
  return out;
}

void write_sentiment_csv(
    std::ostream& out,
    const std::vector<std::pair<Day, DaySentiment>>& series) {
  out << "day,negative,neutral,positive\n";
  for (const auto& [day, s] : series) {
    out << iso_date(day) << ',' << s.negative << ',' << s.neutral << ','
        << s.positive << "\n";
  }
}

}  // namespace crisisnet
