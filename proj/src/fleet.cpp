#include "deliverai/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "deliverai/error.hpp"

namespace deliverai {

const char* to_string(VehicleKind kind) { return kind == VehicleKind::cdv ? "CDV" : "PDV"; }

std::string to_string(const LocationKey& loc, const City& city) {
    if (loc.kind == VehicleKind::cdv) return "h:" + std::to_string(loc.index);
    return "t:" + city.tracts.at(loc.index).id;
}

std::string to_string(const Endpoint& e) {
    return e.type == Endpoint::Type::hotspot ? "h:" + std::to_string(e.hotspot) : "s:" + e.site;
}

Tick leg_ticks(double seconds, Tick tick_s) {
    if (!(seconds > 0.0)) return 0;
    const auto ticks = static_cast<Tick>(std::llround(seconds / static_cast<double>(tick_s)));
    return std::max<Tick>(1, ticks) * tick_s;
}

VehicleId FleetLedger::mint(VehicleKind kind, LocationKey loc, const GeoPoint& position) {
    const auto id = static_cast<VehicleId>(vehicles_.size());
    vehicles_.push_back({id, kind, loc, loc, position, 0.0, 0, false});
    ++mints_[loc];
    return id;
}

VehicleId FleetLedger::acquire(VehicleKind kind, LocationKey loc, const GeoPoint& position) {
    auto& pool = idle_[loc];
    if (pool.empty()) return mint(kind, loc, position);
    const VehicleId v = pool.back();
    pool.pop_back();
    return v;
}

VehicleId FleetLedger::acquire_nearest(VehicleKind kind, LocationKey loc, const GeoPoint& point) {
    auto& pool = idle_[loc];
    if (pool.empty()) return mint(kind, loc, point);
    auto best = pool.begin();
    double best_km = haversine_km(vehicles_[*best].position, point);
    for (auto it = std::next(pool.begin()); it != pool.end(); ++it) {
        const double km = haversine_km(vehicles_[*it].position, point);
        if (km < best_km || (km == best_km && *it < *best)) {
            best = it;
            best_km = km;
        }
    }
    const VehicleId v = *best;
    pool.erase(best);
    return v;
}

void FleetLedger::claim(VehicleId v) {
    const auto& vehicle = vehicles_.at(v);
    auto& pool = idle_[vehicle.location];
    const auto it = std::find(pool.begin(), pool.end(), v);
    if (vehicle.busy || it == pool.end()) throw InvariantViolation("vehicle " + std::to_string(v) + " is not idle");
    pool.erase(it);
}

std::size_t FleetLedger::start_leg(VehicleId v, Endpoint from, Endpoint to, const GeoPoint& to_point,
                                   LocationKey origin, LocationKey dest, Tick depart, Tick duration, double km,
                                   std::vector<DeliveryId> payload) {
    auto& vehicle = vehicles_.at(v);
    if (payload.size() > kVehicleCapacity)
        throw InvariantViolation("leg payload of " + std::to_string(payload.size()) + " exceeds vehicle capacity");
    if (vehicle.busy) throw InvariantViolation("vehicle " + std::to_string(v) + " is already on a leg");
    if (duration < 0 || km < 0.0) throw InvariantViolation("negative leg duration or distance");
    vehicle.busy = true;
    vehicle.load = payload.size();
    vehicle.dist_km += km;
    vehicle.position = to_point;
    vehicle.location = dest;
    const std::size_t id = legs_.size();
    legs_.push_back({id, v, vehicle.kind, origin, dest, std::move(from), std::move(to), depart, depart + duration, km,
                     std::move(payload)});
    if (legs_.back().carrying() && duration > 0) {
        ++active_[origin];
        ++active_total_;
    }
    return id;
}

void FleetLedger::complete_leg(std::size_t leg_id) {
    const auto& leg = legs_.at(leg_id);
    auto& vehicle = vehicles_.at(leg.vehicle);
    if (!vehicle.busy) throw InvariantViolation("completing a leg of an idle vehicle");
    vehicle.busy = false;
    vehicle.load = 0;
    idle_[leg.dest_location].push_back(leg.vehicle);
    if (leg.carrying() && leg.arrive > leg.depart) {
        --active_[leg.origin_location];
        --active_total_;
    }
}

void FleetLedger::sample(Tick t) {
    for (const auto& [loc, count] : active_) {
        auto& peak = peaks_[loc];
        peak = std::max(peak, count);
    }
    series_.emplace_back(t, active_total_);
}

std::size_t FleetLedger::idle_count(LocationKey loc) const {
    const auto it = idle_.find(loc);
    return it == idle_.end() ? 0 : it->second.size();
}

std::size_t FleetLedger::total_peak() const {
    std::size_t total = 0;
    for (const auto& [loc, peak] : peaks_) total += peak;
    return total;
}

std::map<LocationKey, std::size_t> snapshot_active(std::span<const Leg> legs, Tick t) {
    std::map<LocationKey, std::size_t> out;
    for (const auto& leg : legs)
        if (leg.carrying() && leg.depart <= t && t < leg.arrive) ++out[leg.origin_location];
    return out;
}

std::map<LocationKey, std::size_t> replay_peaks(std::span<const Leg> legs) {
    // (time, +1/-1, location); arrivals sort before departures at equal time
    std::vector<std::tuple<Tick, int, LocationKey>> events;
    for (const auto& leg : legs) {
        if (!leg.carrying() || leg.arrive <= leg.depart) continue;
        events.emplace_back(leg.depart, +1, leg.origin_location);
        events.emplace_back(leg.arrive, -1, leg.origin_location);
    }
    std::sort(events.begin(), events.end());
    std::map<LocationKey, long long> count;
    std::map<LocationKey, std::size_t> peak;
    for (const auto& [t, delta, loc] : events) {
        auto& c = count[loc];
        c += delta;
        auto& p = peak[loc];
        p = std::max<std::size_t>(p, static_cast<std::size_t>(c));
    }
    return peak;
}

}  // namespace deliverai
