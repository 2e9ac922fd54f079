#include "deliverai/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace deliverai {

bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    constexpr double kRad = std::numbers::pi / 180.0;
    const double phi1 = a.lat * kRad;
    const double phi2 = b.lat * kRad;
    const double dphi = (b.lat - a.lat) * kRad;
    const double dlambda = (b.lon - a.lon) * kRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    // clamp guards asin against h drifting a hair above 1 for antipodes
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

double manhattan_km(const GeoPoint& a, const GeoPoint& b) {
    const double mid = 0.5 * (a.lat + b.lat);
    return haversine_km({a.lat, a.lon}, {b.lat, a.lon}) + haversine_km({mid, a.lon}, {mid, b.lon});
}

}  // namespace deliverai
