#include "crisisnet/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace crisisnet {

Day day_of(Timestamp ts) {
  // Floor division so pre-1970 timestamps bin correctly.
  std::int64_t d = ts / 86400;
  if (ts % 86400 < 0) --d;
  return static_cast<Day>(d);
}

Day days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<Day>(era * 146097 + static_cast<int>(doe) - 719468);
}

void civil_from_days(Day day, int& y, unsigned& m, unsigned& d) {
  int z = day + 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int yr = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = yr + (m <= 2);
}

std::string iso_date(Day day) {
  int y;
  unsigned m, d;
  civil_from_days(day, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
  return buf;
}

namespace {

bool valid_civil(int y, int mo, int d, int h, int mi, int s) {
  static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (mo < 1 || mo > 12 || d < 1) return false;
  int dim = mdays[mo - 1];
  if (mo == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) dim = 29;
  if (d > dim) return false;
  return h >= 0 && h < 24 && mi >= 0 && mi < 60 && s >= 0 && s <= 60;
}

}  // namespace

Timestamp parse_rfc3339(const std::string& text) {
  int y, mo, d, h, mi, s;
  int n = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h,
                  &mi, &s, &n) != 6 &&
      std::sscanf(text.c_str(), "%4d-%2d-%2d %2d:%2d:%2d%n", &y, &mo, &d, &h,
                  &mi, &s, &n) != 6) {
    throw std::invalid_argument("bad RFC 3339 timestamp: " + text);
  }
  if (!valid_civil(y, mo, d, h, mi, s))
    throw std::invalid_argument("bad RFC 3339 timestamp: " + text);
  const char* p = text.c_str() + n;
  if (*p == '.') {  // fractional seconds, ignored
    ++p;
    if (*p < '0' || *p > '9')
      throw std::invalid_argument("bad RFC 3339 timestamp: " + text);
    while (*p >= '0' && *p <= '9') ++p;
  }
  int offset = 0;
  if (*p == 'Z' || *p == 'z') {
    ++p;
  } else if (*p == '+' || *p == '-') {
    int oh, om;
    int sign = (*p == '-') ? -1 : 1;
    int n2 = 0;
    if (std::sscanf(p + 1, "%2d:%2d%n", &oh, &om, &n2) != 2 || n2 != 5)
      throw std::invalid_argument("bad RFC 3339 offset: " + text);
    offset = sign * (oh * 3600 + om * 60);
    p += 6;
  } else {
    throw std::invalid_argument("missing RFC 3339 offset: " + text);
  }
  if (*p != '\0') throw std::invalid_argument("trailing junk in timestamp: " + text);
  Timestamp days = days_from_civil(y, static_cast<unsigned>(mo),
                                   static_cast<unsigned>(d));
  return days * 86400 + h * 3600 + mi * 60 + s - offset;
}

Day parse_iso_date(const std::string& text) {
  int y, mo, d;
  int n = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &n) != 3 ||
      n != static_cast<int>(text.size()) || !valid_civil(y, mo, d, 0, 0, 0)) {
    throw std::invalid_argument("bad ISO date: " + text);
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
}

}  // namespace crisisnet
