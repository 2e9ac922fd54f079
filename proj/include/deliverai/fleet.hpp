#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "deliverai/geo.hpp"
#include "deliverai/routing.hpp"

namespace deliverai {

using VehicleId = std::uint32_t;
using Tick = std::int64_t;

enum class VehicleKind { cdv, pdv };

const char* to_string(VehicleKind kind);

/// Where a vehicle is pooled and where its legs are attributed: CDVs live
/// at hotspots, PDVs in census tracts (by tract index).
struct LocationKey {
    VehicleKind kind = VehicleKind::cdv;
    std::size_t index = 0;

    auto operator<=>(const LocationKey&) const = default;
};

std::string to_string(const LocationKey& loc, const City& city);

/// A leg endpoint: a hotspot or a producer/consumer site.
struct Endpoint {
    enum class Type { hotspot, site } type = Type::hotspot;
    HotspotIndex hotspot = 0;
    std::string site;

    static Endpoint at_hotspot(HotspotIndex h) { return {Type::hotspot, h, {}}; }
    static Endpoint at_site(std::string id) { return {Type::site, 0, std::move(id)}; }

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

std::string to_string(const Endpoint& e);

struct Vehicle {
    VehicleId id = 0;
    VehicleKind kind = VehicleKind::cdv;
    LocationKey home;      // pool the vehicle was minted into
    LocationKey location;  // current (or, in transit, next) pool
    GeoPoint position;
    double dist_km = 0.0;
    std::size_t load = 0;
    bool busy = false;
};

inline constexpr std::size_t kVehicleCapacity = 2;

struct Leg {
    std::size_t id = 0;
    VehicleId vehicle = 0;
    VehicleKind kind = VehicleKind::cdv;
    LocationKey origin_location;  // attribution for active counts
    LocationKey dest_location;    // pool the vehicle joins on arrival
    Endpoint from;
    Endpoint to;
    Tick depart = 0;
    Tick arrive = 0;
    double km = 0.0;
    std::vector<DeliveryId> payload;

    bool carrying() const { return !payload.empty(); }
};

/// Whole seconds a leg of `seconds` occupies on a `tick_s` clock: zero for
/// a zero-length leg, otherwise rounded to the nearest multiple, minimum
/// one tick.
Tick leg_ticks(double seconds, Tick tick_s = 1);

/// Vehicle pools, leg log and running active-vehicle counters for one run.
/// Vehicles are minted on demand, so an acquire never fails.
class FleetLedger {
public:
    /// Pops the most recently idled vehicle at `loc`, or mints one there.
    VehicleId acquire(VehicleKind kind, LocationKey loc, const GeoPoint& position);

    /// Nearest idle vehicle at `loc` by haversine to `point` (lowest id on
    /// ties), or a new one minted at `point`.
    VehicleId acquire_nearest(VehicleKind kind, LocationKey loc, const GeoPoint& point);

    /// Takes a specific idle vehicle out of its pool.
    void claim(VehicleId v);

    /// Starts a leg at `depart` lasting `duration` ticks. Throws
    /// InvariantViolation if the payload exceeds capacity or the vehicle is
    /// already on a leg.
    std::size_t start_leg(VehicleId v, Endpoint from, Endpoint to, const GeoPoint& to_point, LocationKey origin,
                          LocationKey dest, Tick depart, Tick duration, double km, std::vector<DeliveryId> payload);

    /// Ends a leg: the vehicle unloads and becomes idle in the leg's
    /// destination pool.
    void complete_leg(std::size_t leg_id);

    /// Records the running active counts as the sample for tick `t`.
    void sample(Tick t);

    const std::vector<Leg>& legs() const { return legs_; }
    const std::vector<Vehicle>& vehicles() const { return vehicles_; }
    const std::map<LocationKey, std::size_t>& peaks() const { return peaks_; }
    const std::map<LocationKey, std::size_t>& mints() const { return mints_; }
    /// Total active vehicles at each sampled tick, in sampling order.
    const std::vector<std::pair<Tick, std::size_t>>& active_series() const { return series_; }
    std::size_t idle_count(LocationKey loc) const;

    /// Sum over locations of the peak active count.
    std::size_t total_peak() const;

private:
    VehicleId mint(VehicleKind kind, LocationKey loc, const GeoPoint& position);

    std::vector<Vehicle> vehicles_;
    std::vector<Leg> legs_;
    std::map<LocationKey, std::vector<VehicleId>> idle_;
    std::map<LocationKey, std::size_t> active_;
    std::map<LocationKey, std::size_t> peaks_;
    std::map<LocationKey, std::size_t> mints_;
    std::vector<std::pair<Tick, std::size_t>> series_;
    std::size_t active_total_ = 0;
};

/// Per-location count of carrying legs with depart <= t < arrive, attributed
/// to the leg's origin location. A pure function of the leg log.
std::map<LocationKey, std::size_t> snapshot_active(std::span<const Leg> legs, Tick t);

/// Peak per location recomputed from the leg log by sweeping departures and
/// arrivals in time order.
std::map<LocationKey, std::size_t> replay_peaks(std::span<const Leg> legs);

}  // namespace deliverai
