#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crisisnet/textprep.hpp"

namespace crisisnet {

// term -> valence, terms lowercase.
using Lexicon = std::unordered_map<std::string, double>;

// TSV "term<TAB>valence". Throws std::runtime_error on I/O or parse failure.
Lexicon load_lexicon(const std::string& path);

enum class SentimentLabel { negative, neutral, positive };

const char* to_string(SentimentLabel label);

// Summed valence s mapped to s / sqrt(s^2 + 15); 0 when nothing matches.
double compound_score(const std::vector<std::string>& tokens, const Lexicon& lex);

// Thresholds +-0.05. Input outside [-1, 1] throws std::invalid_argument.
SentimentLabel classify(double compound);

struct DaySentiment {
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t positive = 0;
};

// Per-day class counts, zero-filled across the day range.
std::vector<std::pair<Day, DaySentiment>> sentiment_timeseries(
    const std::vector<Document>& docs, const Lexicon& lex);

// CSV "day,negative,neutral,positive".
void write_sentiment_csv(std::ostream& out,
                         const std::vector<std::pair<Day, DaySentiment>>& series);

}  // namespace crisisnet
