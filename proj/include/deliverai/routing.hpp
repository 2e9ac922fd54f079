#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "deliverai/agents.hpp"
#include "deliverai/network.hpp"

namespace deliverai {

using DeliveryId = std::uint32_t;

/// What the routing layer needs to know about a delivery sitting at a hotspot.
struct AgentView {
    DeliveryId id = 0;
    HotspotIndex at = 0;
    HotspotIndex dest = 0;
};

/// Preferred action set: the top-k next hops of the destination agent's
/// Q-row at `at`, best first.
struct PreferredActionSet {
    DeliveryId owner = 0;
    HotspotIndex at = 0;
    HotspotIndex dest = 0;
    std::vector<HotspotIndex> actions;
};

struct Request {
    DeliveryId d_i = 0;  // always the smaller id
    DeliveryId d_j = 0;
    HotspotIndex h_com = 0;
    double qsum = 0.0;

    friend bool operator==(const Request&, const Request&) = default;
};

/// k = max(1, floor(|H| / 10)).
std::size_t pas_size(std::size_t n_hotspots);

/// Indices of the k largest entries in descending value order, lowest index
/// first among equal values.
std::vector<HotspotIndex> top_actions(std::span<const double> qrow, std::size_t k);

PreferredActionSet preferred_action_set(const AgentView& d, const QTableSet& tables);

struct CommonHotspot {
    HotspotIndex h_com = 0;
    double qsum = 0.0;
};

/// Best hotspot in both sets by the sum of normalized Q-values.
std::optional<CommonHotspot> common_hotspot(const PreferredActionSet& pas_i, const PreferredActionSet& pas_j,
                                            const QTableSet& tables);

/// Pairing proposals among `pool`. Two deliveries are candidates when the
/// hotspots they occupy are at most `r_agent_km` apart. Members at their
/// destination hotspot are ignored. Each unordered pair is considered once.
std::vector<Request> agent_interaction(std::span<const AgentView> pool, const OverlayNetwork& net,
                                       const QTableSet& tables, double r_agent_km);

struct SharingState {
    std::optional<DeliveryId> partner;
    std::optional<HotspotIndex> meet_at;
    bool co_located = false;
};

/// Per-delivery sharing pointers; ids index directly into the book.
class SharingBook {
public:
    explicit SharingBook(std::size_t n_deliveries = 0) : states_(n_deliveries) {}

    std::size_t size() const { return states_.size(); }
    const SharingState& state(DeliveryId d) const { return states_.at(d); }
    bool is_paired(DeliveryId d) const { return states_.at(d).partner.has_value(); }
    std::optional<DeliveryId> partner(DeliveryId d) const { return states_.at(d).partner; }

    void pair(DeliveryId a, DeliveryId b, HotspotIndex meet_at);
    void set_meeting(DeliveryId a, HotspotIndex meet_at, bool co_located);
    void unpair(DeliveryId a);

    /// Throws InvariantViolation unless partner(partner(d)) == d for all d.
    void check_symmetry() const;

private:
    std::vector<SharingState> states_;
};

enum class RequestStatus { accepted, rejected, discarded };

const char* to_string(RequestStatus status);

struct RequestDecision {
    Request request;
    RequestStatus status = RequestStatus::rejected;
};

/// Descending qsum, ties by (d_i, d_j). A request is accepted iff both
/// members are still unpaired; accepted members are paired in `book` with
/// meet_at = h_com. Returns one decision per request, in processing order.
std::vector<RequestDecision> handle_requests(std::vector<Request> requests, SharingBook& book);

enum class PairOutcome {
    continue_shared,  // both travel on to h_com in one vehicle
    split_at_destination,
    split_no_common,
};

struct PairDecision {
    PairOutcome outcome = PairOutcome::split_no_common;
    HotspotIndex next = 0;  // valid for continue_shared
};

/// Decision for a synchronized pair at its shared hotspot. Splits unpair
/// both members in `book`. A common hotspot equal to the current one would
/// make no progress, so it also splits.
PairDecision continue_or_split(const AgentView& a, const AgentView& b, SharingBook& book, const QTableSet& tables);

/// Next hop of an unpaired delivery: argmax of its destination agent's row.
HotspotIndex solo_hop(const AgentView& d, const QTableSet& tables);

}  // namespace deliverai
