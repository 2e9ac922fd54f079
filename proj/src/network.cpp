#include "deliverai/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deliverai/error.hpp"
#include "deliverai/rng.hpp"

namespace deliverai {

using nlohmann::json;

const char* to_string(RoadModel model) { return model == RoadModel::haversine ? "haversine" : "manhattan"; }

RoadModel road_model_from_string(const std::string& s) {
    if (s == "haversine") return RoadModel::haversine;
    if (s == "manhattan") return RoadModel::manhattan;
    throw ValidationError("unknown road model '" + s + "' (expected haversine or manhattan)");
}

double road_km(RoadModel model, const GeoPoint& a, const GeoPoint& b) {
    return model == RoadModel::haversine ? haversine_km(a, b) : manhattan_km(a, b);
}

const char* to_string(SiteKind kind) { return kind == SiteKind::producer ? "producer" : "consumer"; }

SiteKind site_kind_from_string(const std::string& s) {
    if (s == "producer") return SiteKind::producer;
    if (s == "consumer") return SiteKind::consumer;
    throw ValidationError("unknown site kind '" + s + "'");
}

namespace {

bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
    const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
    if (std::abs(cross) > 1e-12) return false;
    return p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat) &&
           p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon);
}

int orientation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    const double v = (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2, const GeoPoint& q1,
                        const GeoPoint& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(q1, p1, p2)) || (o2 == 0 && on_segment(q2, p1, p2)) ||
           (o3 == 0 && on_segment(p1, q1, q2)) || (o4 == 0 && on_segment(p2, q1, q2));
}

void validate_polygon(const CensusTract& tract) {
    const auto& poly = tract.polygon;
    if (poly.empty()) return;
    if (poly.size() < 3) throw ValidationError("tract " + tract.id + ": polygon needs at least 3 vertices");
    for (const auto& p : poly)
        if (!is_valid(p)) throw ValidationError("tract " + tract.id + ": invalid polygon vertex");
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex by construction
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                throw ValidationError("tract " + tract.id + ": polygon is self-intersecting");
        }
    }
}

std::pair<std::size_t, std::size_t> grid_shape(std::size_t n, double height_km, double width_km) {
    std::pair<std::size_t, std::size_t> best{1, n};
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t rows = 1; rows <= n; ++rows) {
        if (n % rows != 0) continue;
        const std::size_t cols = n / rows;
        const double score = std::abs(std::log((height_km / rows) / (width_km / cols)));
        if (score < best_score - 1e-12) {
            best_score = score;
            best = {rows, cols};
        }
    }
    return best;
}

std::vector<std::size_t> spread_counts(std::size_t n_tracts, double per_tract) {
    const auto total = static_cast<std::size_t>(std::llround(per_tract * static_cast<double>(n_tracts)));
    std::vector<std::size_t> counts(n_tracts, total / n_tracts);
    for (std::size_t k = 0; k < total % n_tracts; ++k) ++counts[k];
    return counts;
}

std::string padded(const char* prefix, std::size_t k, int width) {
    std::string digits = std::to_string(k);
    if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

}  // namespace

bool CensusTract::contains(const GeoPoint& p) const {
    if (polygon.empty()) return true;
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = polygon[i];
        const auto& b = polygon[j];
        if (on_segment(p, a, b)) return true;
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (p.lon < x) inside = !inside;
        }
    }
    return inside;
}

OverlayNetwork::OverlayNetwork(std::vector<Hotspot> hotspots, SquareMatrix time_s, SquareMatrix dist_km)
    : hotspots_(std::move(hotspots)), time_(std::move(time_s)), dist_(std::move(dist_km)) {
    const std::size_t n = hotspots_.size();
    if (time_.size() != n || dist_.size() != n)
        throw ValidationError("overlay matrices must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (hotspots_[i].id != i)
            throw ValidationError("hotspot at position " + std::to_string(i) + " has id " +
                                  std::to_string(hotspots_[i].id));
        for (std::size_t j = 0; j < n; ++j) {
            const double t = time_(i, j);
            const double d = dist_(i, j);
            const std::string cell = "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (!std::isfinite(t) || !std::isfinite(d))
                throw ValidationError("non-finite matrix entry at " + cell);
            if (i == j) {
                if (t != 0.0) throw ValidationError("time_s" + cell + " must be 0 on the diagonal");
                if (d != 0.0) throw ValidationError("dist_km" + cell + " must be 0 on the diagonal");
            } else {
                if (!(t > 0.0)) throw ValidationError("time_s" + cell + " = " + std::to_string(t) + " must be positive");
                if (!(d > 0.0)) throw ValidationError("dist_km" + cell + " = " + std::to_string(d) + " must be positive");
            }
        }
    }
    norm_ = normalize_travel_times(time_);
}

double OverlayNetwork::separation_km(HotspotIndex i, HotspotIndex j) const {
    return haversine_km(hotspots_.at(i).location, hotspots_.at(j).location);
}

std::size_t City::tract_index(const std::string& tract_id) const {
    for (std::size_t k = 0; k < tracts.size(); ++k)
        if (tracts[k].id == tract_id) return k;
    throw ValidationError("unknown tract '" + tract_id + "'");
}

const Site& City::site(const std::string& id) const {
    for (const auto& s : sites)
        if (s.id == id) return s;
    throw ValidationError("unknown site '" + id + "'");
}

std::vector<const Site*> City::sites_of_kind(SiteKind kind) const {
    std::vector<const Site*> out;
    for (const auto& s : sites)
        if (s.kind == kind) out.push_back(&s);
    return out;
}

LegCost peripheral_leg(const City& city, const GeoPoint& from, const GeoPoint& to) {
    const double km = road_km(city.road_model, from, to) * city.road_factor;
    return {km / city.pdv_speed_kmh * 3600.0, km};
}

LegCost overlay_leg(const OverlayNetwork& net, HotspotIndex from, HotspotIndex to) {
    return {net.time_s(from, to), net.dist_km(from, to)};
}

std::vector<Hotspot> place_hotspots(const std::vector<CensusTract>& tracts, const std::vector<Site>& sites) {
    std::vector<Hotspot> out;
    out.reserve(tracts.size());
    for (const auto& tract : tracts) {
        // summed in sorted order so the centroid is bit-identical for any
        // permutation of the consumer list
        std::vector<GeoPoint> members;
        for (const auto& s : sites)
            if (s.kind == SiteKind::consumer && s.tract == tract.id) members.push_back(s.location);
        if (members.empty()) throw ValidationError("tract " + tract.id + " has no consumer sites");
        std::sort(members.begin(), members.end(), [](const GeoPoint& a, const GeoPoint& b) {
            return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon;
        });
        double lat = 0.0, lon = 0.0;
        for (const auto& p : members) {
            lat += p.lat;
            lon += p.lon;
        }
        const double n = static_cast<double>(members.size());
        out.push_back({out.size(), {lat / n, lon / n}, tract.id});
    }
    return out;
}

SquareMatrix normalize_travel_times(const SquareMatrix& time_s) {
    const std::size_t n = time_s.size();
    SquareMatrix out(n, 0.0);
    if (n < 2) return out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                lo = std::min(lo, time_s(i, j));
                hi = std::max(hi, time_s(i, j));
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out(i, j) = hi > lo ? (time_s(i, j) - lo) / (hi - lo) : 0.5;
    return out;
}

void validate(const SyntheticCityParams& p) {
    if (p.n_tracts < 2) throw ValidationError("n_tracts must be at least 2");
    if (!(p.consumers_per_tract >= 1.0)) throw ValidationError("consumers_per_tract must be at least 1");
    if (!(p.producers_per_tract > 0.0)) throw ValidationError("producers_per_tract must be positive");
    if (!is_valid({p.bbox.lat_min, p.bbox.lon_min}) || !is_valid({p.bbox.lat_max, p.bbox.lon_max}))
        throw ValidationError("bounding box corners must be valid coordinates");
    if (!(p.bbox.lat_max > p.bbox.lat_min) || !(p.bbox.lon_max > p.bbox.lon_min))
        throw ValidationError("bounding box is degenerate");
    if (!(p.road_factor >= 1.0)) throw ValidationError("road_factor must be >= 1");
    if (!(p.cdv_speed_kmh > 0.0) || !(p.pdv_speed_kmh > 0.0)) throw ValidationError("speeds must be positive");
}

City generate_synthetic_city(const SyntheticCityParams& params, std::uint64_t seed) {
    validate(params);
    const auto& box = params.bbox;
    const double mid_lat = 0.5 * (box.lat_min + box.lat_max);
    const double height_km = haversine_km({box.lat_min, box.lon_min}, {box.lat_max, box.lon_min});
    const double width_km = haversine_km({mid_lat, box.lon_min}, {mid_lat, box.lon_max});
    const auto [rows, cols] = grid_shape(params.n_tracts, height_km, width_km);
    const double dlat = (box.lat_max - box.lat_min) / static_cast<double>(rows);
    const double dlon = (box.lon_max - box.lon_min) / static_cast<double>(cols);

    City city;
    city.pdv_speed_kmh = params.pdv_speed_kmh;
    city.road_factor = params.road_factor;
    city.road_model = params.road_model;
    for (std::size_t k = 0; k < params.n_tracts; ++k) {
        const double lat0 = box.lat_min + dlat * static_cast<double>(k / cols);
        const double lon0 = box.lon_min + dlon * static_cast<double>(k % cols);
        city.tracts.push_back({padded("T", k, 3),
                               {{lat0, lon0}, {lat0, lon0 + dlon}, {lat0 + dlat, lon0 + dlon}, {lat0 + dlat, lon0}}});
    }

    Rng rng(seed);
    auto scatter = [&](SiteKind kind, double per_tract, const char* prefix) {
        const auto counts = spread_counts(params.n_tracts, per_tract);
        std::size_t serial = 0;
        for (std::size_t k = 0; k < params.n_tracts; ++k) {
            const auto& corner = city.tracts[k].polygon.front();
            for (std::size_t c = 0; c < counts[k]; ++c) {
                // strictly interior so every site sits in exactly one tract
                const double lat = corner.lat + dlat * (0.001 + 0.998 * rng.uniform());
                const double lon = corner.lon + dlon * (0.001 + 0.998 * rng.uniform());
                city.sites.push_back({padded(prefix, serial++, 4), kind, {lat, lon}, city.tracts[k].id});
            }
        }
    };
    scatter(SiteKind::consumer, params.consumers_per_tract, "C");
    scatter(SiteKind::producer, params.producers_per_tract, "P");

    auto hotspots = place_hotspots(city.tracts, city.sites);
    const std::size_t n = hotspots.size();
    SquareMatrix time_s(n), dist_km(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                const double km = road_km(params.road_model, hotspots[i].location, hotspots[j].location) * params.road_factor;
                dist_km(i, j) = km;
                time_s(i, j) = km / params.cdv_speed_kmh * 3600.0;
            }
    city.overlay = OverlayNetwork(std::move(hotspots), std::move(time_s), std::move(dist_km));
    return city;
}

HotspotIndex nearest_hotspot(const GeoPoint& p, const City& city) {
    const auto& hs = city.overlay.hotspots();
    if (hs.empty()) throw ValidationError("city has no hotspots");
    HotspotIndex best = 0;
    double best_km = haversine_km(p, hs[0].location);
    for (std::size_t i = 1; i < hs.size(); ++i) {
        const double km = haversine_km(p, hs[i].location);
        if (km < best_km) {
            best_km = km;
            best = i;
        }
    }
    return best;
}

void validate(const City& city) {
    const auto& net = city.overlay;
    if (net.size() == 0) throw ValidationError("city has no hotspots");
    if (!(city.pdv_speed_kmh > 0.0)) throw ValidationError("pdv_speed_kmh must be positive");
    if (!(city.road_factor >= 1.0)) throw ValidationError("road_factor must be >= 1");

    std::set<std::string> tract_ids;
    for (const auto& t : city.tracts) {
        if (!tract_ids.insert(t.id).second) throw ValidationError("duplicate tract id " + t.id);
        validate_polygon(t);
    }

    std::map<std::string, std::size_t> hotspots_per_tract;
    for (const auto& h : net.hotspots()) {
        if (!is_valid(h.location)) throw ValidationError("hotspot " + std::to_string(h.id) + " has invalid coordinates");
        if (!tract_ids.count(h.tract))
            throw ValidationError("hotspot " + std::to_string(h.id) + " references unknown tract " + h.tract);
        ++hotspots_per_tract[h.tract];
    }
    for (const auto& t : city.tracts) {
        const auto it = hotspots_per_tract.find(t.id);
        if (it == hotspots_per_tract.end()) throw ValidationError("tract " + t.id + " has no hotspot");
        if (it->second > 1) throw ValidationError("tract " + t.id + " has more than one hotspot");
    }

    std::set<std::string> site_ids;
    for (const auto& s : city.sites) {
        if (!site_ids.insert(s.id).second) throw ValidationError("duplicate site id " + s.id);
        if (!is_valid(s.location)) throw ValidationError("site " + s.id + " has invalid coordinates");
        if (!tract_ids.count(s.tract)) throw ValidationError("site " + s.id + " references unknown tract " + s.tract);
        if (!city.tracts[city.tract_index(s.tract)].contains(s.location))
            throw ValidationError("site " + s.id + " lies outside tract " + s.tract);
    }
}

namespace {

json point_json(const GeoPoint& p) { return json::array({p.lat, p.lon}); }

json matrix_json(const SquareMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (double v : m.row(i)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError(where + ": expected a number");
    return v.get<double>();
}

std::string text(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ValidationError(where + ": expected a string");
}

SquareMatrix matrix_from_json(const json& v, std::size_t n, const char* name) {
    if (!v.is_array() || v.size() != n)
        throw ValidationError(std::string(name) + ": expected " + std::to_string(n) + " rows");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = v[i];
        if (!row.is_array() || row.size() != n)
            throw ValidationError(std::string(name) + "[" + std::to_string(i) + "]: expected " + std::to_string(n) + " columns");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = number(row[j], std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    return m;
}

}  // namespace

std::string city_to_json(const City& city) {
    json doc;
    json hotspots = json::array();
    for (const auto& h : city.overlay.hotspots())
        hotspots.push_back({{"id", h.id}, {"lat", h.location.lat}, {"lon", h.location.lon}, {"tract", h.tract}});
    json sites = json::array();
    for (const auto& s : city.sites)
        sites.push_back({{"id", s.id}, {"kind", to_string(s.kind)}, {"lat", s.location.lat},
                         {"lon", s.location.lon}, {"tract", s.tract}});
    json tracts = json::array();
    for (const auto& t : city.tracts) {
        json poly = json::array();
        for (const auto& p : t.polygon) poly.push_back(point_json(p));
        tracts.push_back({{"id", t.id}, {"polygon", std::move(poly)}});
    }
    doc["hotspots"] = std::move(hotspots);
    doc["sites"] = std::move(sites);
    doc["tracts"] = std::move(tracts);
    doc["time_s"] = matrix_json(city.overlay.time_matrix());
    doc["dist_km"] = matrix_json(city.overlay.dist_matrix());
    doc["pdv_speed_kmh"] = city.pdv_speed_kmh;
    doc["road_factor"] = city.road_factor;
    doc["road_model"] = to_string(city.road_model);
    return doc.dump(1) + "\n";
}

City city_from_json(const std::string& content) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("city file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("city file must hold a JSON object");

    const auto& jh = require(doc, "hotspots", "city");
    if (!jh.is_array()) throw ValidationError("hotspots: expected an array");
    std::vector<Hotspot> hotspots;
    for (std::size_t i = 0; i < jh.size(); ++i) {
        const std::string where = "hotspots[" + std::to_string(i) + "]";
        const auto& e = jh[i];
        const double id = number(require(e, "id", where), where + ".id");
        if (id < 0 || id != std::floor(id)) throw ValidationError(where + ".id must be a non-negative integer");
        hotspots.push_back({static_cast<HotspotIndex>(id),
                            {number(require(e, "lat", where), where + ".lat"), number(require(e, "lon", where), where + ".lon")},
                            text(require(e, "tract", where), where + ".tract")});
    }
    const std::size_t n = hotspots.size();

    City city;
    const auto& js = require(doc, "sites", "city");
    if (!js.is_array()) throw ValidationError("sites: expected an array");
    for (std::size_t i = 0; i < js.size(); ++i) {
        const std::string where = "sites[" + std::to_string(i) + "]";
        const auto& e = js[i];
        city.sites.push_back({text(require(e, "id", where), where + ".id"),
                              site_kind_from_string(text(require(e, "kind", where), where + ".kind")),
                              {number(require(e, "lat", where), where + ".lat"), number(require(e, "lon", where), where + ".lon")},
                              text(require(e, "tract", where), where + ".tract")});
    }

    if (doc.contains("tracts")) {
        const auto& jt = doc.at("tracts");
        if (!jt.is_array()) throw ValidationError("tracts: expected an array");
        for (std::size_t i = 0; i < jt.size(); ++i) {
            const std::string where = "tracts[" + std::to_string(i) + "]";
            CensusTract tract{text(require(jt[i], "id", where), where + ".id"), {}};
            if (jt[i].contains("polygon")) {
                const auto& poly = jt[i].at("polygon");
                if (!poly.is_array()) throw ValidationError(where + ".polygon: expected an array");
                for (const auto& p : poly) {
                    if (!p.is_array() || p.size() != 2) throw ValidationError(where + ".polygon: vertices are [lat, lon]");
                    tract.polygon.push_back({number(p[0], where), number(p[1], where)});
                }
                if (tract.polygon.size() > 1 && tract.polygon.front() == tract.polygon.back()) tract.polygon.pop_back();
            }
            city.tracts.push_back(std::move(tract));
        }
    } else {
        // geometry-free files: tracts are whatever the hotspots and sites name
        std::set<std::string> seen;
        auto add = [&](const std::string& id) {
            if (seen.insert(id).second) city.tracts.push_back({id, {}});
        };
        for (const auto& h : hotspots) add(h.tract);
        for (const auto& s : city.sites) add(s.tract);
    }

    city.pdv_speed_kmh = number(require(doc, "pdv_speed_kmh", "city"), "pdv_speed_kmh");
    city.road_factor = doc.contains("road_factor") ? number(doc.at("road_factor"), "road_factor") : 1.0;
    if (doc.contains("road_model")) {
        if (!doc.at("road_model").is_string()) throw ValidationError("road_model: expected a string");
        city.road_model = road_model_from_string(doc.at("road_model").get<std::string>());
    }
    auto time_s = matrix_from_json(require(doc, "time_s", "city"), n, "time_s");
    auto dist_km = matrix_from_json(require(doc, "dist_km", "city"), n, "dist_km");
    city.overlay = OverlayNetwork(std::move(hotspots), std::move(time_s), std::move(dist_km));
    validate(city);
    return city;
}

std::vector<std::string> asymmetry_warnings(const OverlayNetwork& net) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j)
            if (net.time_s(i, j) != net.time_s(j, i) || net.dist_km(i, j) != net.dist_km(j, i))
                out.push_back("overlay edge " + std::to_string(i) + "<->" + std::to_string(j) + " is asymmetric");
    return out;
}

void save_city(const City& city, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << city_to_json(city);
}

City load_city(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read city file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return city_from_json(buf.str());
}

std::uint64_t fingerprint(const City& city) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : city_to_json(city)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<HotspotIndex> shortest_time_path(const OverlayNetwork& net, HotspotIndex from, HotspotIndex to) {
    const std::size_t n = net.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<HotspotIndex> prev(n, n);
    std::vector<bool> done(n, false);
    dist[from] = 0.0;
    for (std::size_t iter = 0; iter < n; ++iter) {
        HotspotIndex u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
        if (u == n || u == to) break;
        done[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
            if (v == u || done[v]) continue;
            const double alt = dist[u] + net.time_s(u, v);
            if (alt < dist[v]) {
                dist[v] = alt;
                prev[v] = u;
            }
        }
    }
    std::vector<HotspotIndex> hops;
    for (HotspotIndex v = to; v != from; v = prev[v]) hops.push_back(v);
    std::reverse(hops.begin(), hops.end());
    return hops;
}

}  // namespace deliverai
