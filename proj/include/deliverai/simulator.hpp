#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deliverai/agents.hpp"
#include "deliverai/fleet.hpp"
#include "deliverai/network.hpp"
#include "deliverai/routing.hpp"

namespace deliverai {

// ---------------------------------------------------------------- load ---

enum class LoadKind { uniform, gaussian };

const char* to_string(LoadKind kind);
LoadKind load_kind_from_string(const std::string& s);

struct LoadProfile {
    LoadKind kind = LoadKind::uniform;
    unsigned l0 = 5;             // deliveries per minute at peak
    double sigma_min = 8.0;      // gaussian only
    unsigned duration_min = 60;  // generation horizon
};

void validate(const LoadProfile& profile);

/// Deliveries started during `minute`. Uniform: l0. Gaussian: the bimodal
/// density (peaks at minutes 15 and 45) scaled so its maximum over the
/// integer minutes of the horizon equals l0, then floored.
std::size_t load_at(const LoadProfile& profile, unsigned minute);

/// Raw bimodal density used by the gaussian profile.
double bimodal_density(double minute, double sigma_min);

/// One order as it appears in a load file.
struct DeliveryOrder {
    DeliveryId id = 0;
    Tick start_s = 0;
    std::string producer;
    std::string consumer;

    friend bool operator==(const DeliveryOrder&, const DeliveryOrder&) = default;
};

/// An order resolved against a city: entry and exit hotspots attached.
struct Delivery {
    DeliveryId id = 0;
    std::string producer;
    std::string consumer;
    HotspotIndex src = 0;
    HotspotIndex dest = 0;
    Tick start_s = 0;

    friend bool operator==(const Delivery&, const Delivery&) = default;
};

/// Per minute, load_at(t) orders with start times uniform inside the minute
/// and producer/consumer drawn uniformly with replacement. Ids follow
/// (start_s, draw order).
std::vector<Delivery> generate_deliveries(const LoadProfile& profile, const City& city, std::uint64_t seed);

/// Attaches nearest hotspots; orders are re-sorted by (start_s, id) and ids
/// must be unique.
std::vector<Delivery> resolve_orders(const std::vector<DeliveryOrder>& orders, const City& city);

std::vector<DeliveryOrder> to_orders(const std::vector<Delivery>& deliveries);

/// Load file: CSV with header `id,start_s,producer_id,consumer_id`.
void save_load_csv(const std::vector<DeliveryOrder>& orders, const std::filesystem::path& path);
std::vector<DeliveryOrder> load_load_csv(const std::filesystem::path& path);

std::uint64_t fingerprint(const std::vector<Delivery>& deliveries);

// ----------------------------------------------------------- simulation ---

enum class SimMode { deliverai, baseline1, baseline2 };

const char* to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& s);

struct SimConfig {
    SimMode mode = SimMode::deliverai;
    Tick tick_s = 1;
    double r_agent_km = 1.0;
    Tick tau_s = 900;
    std::uint64_t seed = 0;
    Tick stable_from_s = 600;
    Tick stable_to_s = 3000;
    /// Waiting budget per delivery: an unpaired delivery may stay at a
    /// hotspot looking for a partner until its total wait reaches this, then
    /// it moves on solo. 0 dispatches on the arrival tick.
    Tick max_hold_s = 120;
    /// Overlay hops after which a delivery stops pairing and follows the
    /// minimum-time path.
    std::size_t max_overlay_hops = 0;  // 0 means 2 * |H|
    /// DeliverAI only. Off routes every delivery solo along its Q-table.
    bool path_sharing = true;
};

void validate(const SimConfig& cfg);

struct DeliveryRecord {
    DeliveryId id = 0;
    std::string producer;
    std::string consumer;
    HotspotIndex src = 0;
    HotspotIndex dest = 0;
    Tick start_s = 0;
    std::optional<Tick> end_s;
    Tick wait_s = 0;
    /// Endpoint reached by each carrying leg, in order. |path| is the hop count.
    std::vector<Endpoint> path;
    std::size_t shared_legs = 0;
};

struct RequestLogEntry {
    Tick tick = 0;
    Request request;
    RequestStatus status = RequestStatus::rejected;
};

struct SimDiagnostics {
    std::size_t fallback_routes = 0;   // solo hops taken from the minimum-time path
    std::size_t pairs_formed = 0;      // accepted requests
    std::size_t shared_legs = 0;       // legs carrying two deliveries
    std::size_t hop_cap_hits = 0;
    Tick last_tick = 0;
};

struct SimResult {
    SimMode mode = SimMode::deliverai;
    SimConfig config;
    std::vector<DeliveryRecord> deliveries;
    std::vector<Leg> legs;
    std::vector<std::pair<Tick, std::size_t>> active_series;
    std::map<LocationKey, std::size_t> peaks;
    std::vector<RequestLogEntry> requests;
    SimDiagnostics diagnostics;
};

SimResult run_deliverai(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                        const SimConfig& cfg);
SimResult run_baseline1(const City& city, const std::vector<Delivery>& deliveries, const SimConfig& cfg);
SimResult run_baseline2(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                        const SimConfig& cfg);

/// Dispatches on cfg.mode; `tables` is ignored by baseline 1.
SimResult simulate(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                   const SimConfig& cfg);

/// Writes deliveries.csv, legs.csv, active_counts.csv, requests.csv and
/// run_manifest.json into `dir`.
void save_result_bundle(const std::filesystem::path& dir, const SimResult& result, const City& city,
                        const std::map<std::string, std::string>& provenance);

}  // namespace deliverai
