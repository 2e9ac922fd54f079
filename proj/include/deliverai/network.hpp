#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deliverai/geo.hpp"
#include "deliverai/matrix.hpp"

namespace deliverai {

using HotspotIndex = std::size_t;

enum class SiteKind { producer, consumer };

const char* to_string(SiteKind kind);
SiteKind site_kind_from_string(const std::string& s);

struct Site {
    std::string id;
    SiteKind kind = SiteKind::consumer;
    GeoPoint location;
    std::string tract;

    friend bool operator==(const Site&, const Site&) = default;
};

/// Administrative area. `polygon` is an ordered ring without the closing
/// vertex repeated; an empty polygon means the boundary is unknown (file
/// input without geometry) and containment checks are skipped.
struct CensusTract {
    std::string id;
    std::vector<GeoPoint> polygon;

    bool contains(const GeoPoint& p) const;

    friend bool operator==(const CensusTract&, const CensusTract&) = default;
};

struct Hotspot {
    HotspotIndex id = 0;
    GeoPoint location;
    std::string tract;

    friend bool operator==(const Hotspot&, const Hotspot&) = default;
};

/// The clique of hotspots. `time_s` and `dist_km` may be asymmetric; the
/// normalized matrix is derived from `time_s` on construction.
class OverlayNetwork {
public:
    OverlayNetwork() = default;
    OverlayNetwork(std::vector<Hotspot> hotspots, SquareMatrix time_s, SquareMatrix dist_km);

    std::size_t size() const { return hotspots_.size(); }
    const std::vector<Hotspot>& hotspots() const { return hotspots_; }
    const Hotspot& hotspot(HotspotIndex i) const { return hotspots_.at(i); }

    double time_s(HotspotIndex i, HotspotIndex j) const { return time_(i, j); }
    double dist_km(HotspotIndex i, HotspotIndex j) const { return dist_(i, j); }
    double time_norm(HotspotIndex i, HotspotIndex j) const { return norm_(i, j); }

    const SquareMatrix& time_matrix() const { return time_; }
    const SquareMatrix& dist_matrix() const { return dist_; }
    const SquareMatrix& time_norm_matrix() const { return norm_; }

    /// Haversine distance between two hotspot locations.
    double separation_km(HotspotIndex i, HotspotIndex j) const;

    friend bool operator==(const OverlayNetwork& a, const OverlayNetwork& b) {
        return a.hotspots_ == b.hotspots_ && a.time_ == b.time_ && a.dist_ == b.dist_;
    }

private:
    std::vector<Hotspot> hotspots_;
    SquareMatrix time_;
    SquareMatrix dist_;
    SquareMatrix norm_;
};

/// Street distance model for synthetic overlays and peripheral legs:
/// great-circle or grid (Manhattan) distance, times road_factor.
enum class RoadModel { haversine, manhattan };

const char* to_string(RoadModel model);
RoadModel road_model_from_string(const std::string& s);
double road_km(RoadModel model, const GeoPoint& a, const GeoPoint& b);

struct City {
    OverlayNetwork overlay;
    std::vector<Site> sites;
    std::vector<CensusTract> tracts;
    double pdv_speed_kmh = 30.0;
    double road_factor = 1.0;
    RoadModel road_model = RoadModel::haversine;

    std::size_t tract_index(const std::string& tract_id) const;
    const Site& site(const std::string& id) const;
    std::vector<const Site*> sites_of_kind(SiteKind kind) const;

    friend bool operator==(const City&, const City&) = default;
};

/// Travel cost of one vehicle leg.
struct LegCost {
    double seconds = 0.0;
    double km = 0.0;
};

/// Peripheral (site <-> hotspot, or door-to-door) leg: haversine distance
/// scaled by the road factor, driven at the PDV speed.
LegCost peripheral_leg(const City& city, const GeoPoint& from, const GeoPoint& to);

/// Overlay leg between two hotspots, straight from the matrices.
LegCost overlay_leg(const OverlayNetwork& net, HotspotIndex from, HotspotIndex to);

std::vector<Hotspot> place_hotspots(const std::vector<CensusTract>& tracts,
                                    const std::vector<Site>& sites);

/// Min-max scaling over the off-diagonal entries; diagonal is 0. When all
/// off-diagonal entries are equal every off-diagonal value becomes 0.5.
SquareMatrix normalize_travel_times(const SquareMatrix& time_s);

struct BoundingBox {
    double lat_min = 41.860;
    double lon_min = -87.670;
    double lat_max = 41.896;
    double lon_max = -87.622;
};

struct SyntheticCityParams {
    std::size_t n_tracts = 30;
    double consumers_per_tract = 992.0 / 30.0;
    double producers_per_tract = 356.0 / 30.0;
    BoundingBox bbox;
    double road_factor = 1.3;
    RoadModel road_model = RoadModel::haversine;
    double cdv_speed_kmh = 30.0;
    double pdv_speed_kmh = 30.0;
};

void validate(const SyntheticCityParams& params);

/// Rectangular tract grid over the bounding box with uniformly scattered
/// sites. Pure function of (params, seed).
City generate_synthetic_city(const SyntheticCityParams& params, std::uint64_t seed);

/// Argmin haversine distance, lowest index on ties.
HotspotIndex nearest_hotspot(const GeoPoint& p, const City& city);

/// Full structural validation; throws ValidationError on the first problem.
void validate(const City& city);

/// Directional edges are legal (real traffic); these are informational.
std::vector<std::string> asymmetry_warnings(const OverlayNetwork& net);

/// Canonical JSON text of the city. Identical cities give identical bytes.
std::string city_to_json(const City& city);
City city_from_json(const std::string& text);

void save_city(const City& city, const std::filesystem::path& path);
City load_city(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical JSON; used as run provenance.
std::uint64_t fingerprint(const City& city);

/// Hop sequence (excluding `from`) of the minimum-time path over the overlay.
std::vector<HotspotIndex> shortest_time_path(const OverlayNetwork& net, HotspotIndex from,
                                             HotspotIndex to);

}  // namespace deliverai
