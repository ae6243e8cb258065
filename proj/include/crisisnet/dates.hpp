#pragma once

#include <cstdint>
#include <string>

namespace crisisnet {

// Days since 1970-01-01 (UTC calendar day).
using Day = std::int32_t;

// Unix timestamp, seconds, UTC.
using Timestamp = std::int64_t;

Day day_of(Timestamp ts);

// "2020-08-27"
std::string iso_date(Day day);

Day days_from_civil(int year, unsigned month, unsigned dayofmonth);
void civil_from_days(Day day, int& year, unsigned& month, unsigned& dayofmonth);

// Parses RFC 3339 timestamps ("2020-08-27T01:02:03Z", optional fractional
// seconds and numeric offsets). Throws std::invalid_argument on bad input.
Timestamp parse_rfc3339(const std::string& text);

// Parses "2020-08-27" into a Day. Throws std::invalid_argument on bad input.
Day parse_iso_date(const std::string& text);

}  // namespace crisisnet
