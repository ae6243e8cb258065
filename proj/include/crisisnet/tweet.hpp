#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crisisnet/dates.hpp"

namespace crisisnet {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  bool valid() const {
    return lon >= -180.0 && lon <= 180.0 && lat >= -90.0 && lat <= 90.0;
  }
};

// Four corners, lon/lat degrees, in record order.
using BBox = std::array<GeoPoint, 4>;

struct Tweet {
  std::string id;
  std::string author_id;
  std::string author_handle;  // no leading '@'
  std::string text;
  Timestamp created_at = 0;
  std::optional<BBox> bbox;
  std::optional<std::string> place_name;
  std::vector<std::string> mentions;  // lowercased, no '@', no self, no dups

  // Filled by the ingest pipeline when geography is available.
  std::optional<GeoPoint> centroid;
  std::string region;  // empty until assigned; "unassigned" when no hit

  Day day() const { return day_of(created_at); }
};

struct CorpusStats {
  std::size_t total_loaded = 0;       // well-formed lines
  std::size_t duplicates_dropped = 0;
  std::size_t irrelevant_dropped = 0;
  std::size_t malformed_skipped = 0;
  std::size_t unique_users = 0;
};

}  // namespace crisisnet
