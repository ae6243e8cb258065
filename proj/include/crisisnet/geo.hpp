#pragma once

#include <string>
#include <vector>

#include "crisisnet/tweet.hpp"

namespace crisisnet {

// One polygon = outer ring plus optional holes; containment by the even-odd
// rule over all rings, boundary points inside.
struct PolygonRegion {
  std::string name;
  std::vector<std::vector<GeoPoint>> rings;

  bool contains(const GeoPoint& p) const;
};

class RegionSet {
 public:
  RegionSet() = default;

  // GeoJSON FeatureCollection; each feature needs a "name" property and a
  // Polygon or MultiPolygon geometry. Malformed files throw
  // std::runtime_error.
  static RegionSet load_geojson(const std::string& path);
  static RegionSet parse_geojson(const std::string& body);

  void add(PolygonRegion region) { regions_.push_back(std::move(region)); }

  // First region in file order containing p, else "unassigned".
  std::string assign(const GeoPoint& p) const;

  std::size_t size() const { return regions_.size(); }
  bool empty() const { return regions_.empty(); }

 private:
  std::vector<PolygonRegion> regions_;
};

inline const std::string kUnassignedRegion = "unassigned";

}  // namespace crisisnet
