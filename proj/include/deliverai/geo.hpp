#pragma once

namespace deliverai {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0;  // degrees
    double lon = 0.0;  // degrees

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p);

/// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

/// North-south plus east-west great-circle legs, the east-west leg taken at
/// the mean latitude. Symmetric.
double manhattan_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace deliverai
