#include "crisisnet/geo.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace crisisnet {

using nlohmann::json;

namespace {

bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double cross =
      (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (std::abs(cross) > 1e-12) return false;
  const double dot =
      (p.lon - a.lon) * (b.lon - a.lon) + (p.lat - a.lat) * (b.lat - a.lat);
  if (dot < 0) return false;
  const double len2 =
      (b.lon - a.lon) * (b.lon - a.lon) + (b.lat - a.lat) * (b.lat - a.lat);
  return dot <= len2;
}

// Even-odd ray crossing over one ring; boundary handled by the caller.
bool ring_crossings_odd(const GeoPoint& p, const std::vector<GeoPoint>& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool PolygonRegion::contains(const GeoPoint& p) const {
  bool inside = false;
  for (const auto& ring : rings) {
    if (ring.size() < 3) continue;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if (on_segment(p, ring[j], ring[i])) return true;
    }
    if (ring_crossings_odd(p, ring)) inside = !inside;
  }
  return inside;
}

std::string RegionSet::assign(const GeoPoint& p) const {
  for (const auto& r : regions_) {
    if (r.contains(p)) return r.name;
  }
  return kUnassignedRegion;
}

namespace {

std::vector<GeoPoint> parse_ring(const json& ring) {
  std::vector<GeoPoint> out;
  for (const auto& pt : ring) {
    if (!pt.is_array() || pt.size() < 2)
      throw std::runtime_error("bad ring coordinate");
    GeoPoint p{pt[0].get<double>(), pt[1].get<double>()};
    if (!p.valid()) throw std::runtime_error("ring coordinate out of range");
    out.push_back(p);
  }
  // Drop a closing point equal to the first; containment closes implicitly.
  if (out.size() > 1 && out.front().lon == out.back().lon &&
      out.front().lat == out.back().lat) {
    out.pop_back();
  }
  if (out.size() < 3) throw std::runtime_error("ring with fewer than 3 points");
  return out;
}

}  // namespace

RegionSet RegionSet::parse_geojson(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad GeoJSON: ") + e.what());
  }
  if (j.value("type", std::string{}) != "FeatureCollection" ||
      !j.contains("features")) {
    throw std::runtime_error("GeoJSON root must be a FeatureCollection");
  }
  RegionSet set;
  for (const auto& feature : j["features"]) {
    if (!feature.contains("properties") ||
        !feature["properties"].contains("name")) {
      throw std::runtime_error("feature without a name property");
    }
    PolygonRegion region;
    region.name = feature["properties"]["name"].get<std::string>();
    const auto& geom = feature.at("geometry");
    const std::string type = geom.at("type").get<std::string>();
    const auto& coords = geom.at("coordinates");
    if (type == "Polygon") {
      for (const auto& ring : coords) region.rings.push_back(parse_ring(ring));
    } else if (type == "MultiPolygon") {
      for (const auto& poly : coords)
        for (const auto& ring : poly) region.rings.push_back(parse_ring(ring));
    } else {
      throw std::runtime_error("unsupported geometry type: " + type);
    }
    set.add(std::move(region));
  }
  return set;
}

RegionSet RegionSet::load_geojson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open region file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geojson(buf.str());
}

}  // namespace crisisnet
