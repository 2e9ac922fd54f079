#include "deliverai/routing.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "deliverai/error.hpp"

namespace deliverai {

const char* to_string(RequestStatus status) {
    switch (status) {
        case RequestStatus::accepted: return "accepted";
        case RequestStatus::rejected: return "rejected";
        case RequestStatus::discarded: return "discarded";
    }
    return "?";
}

std::size_t pas_size(std::size_t n_hotspots) { return std::max<std::size_t>(1, n_hotspots / 10); }

std::vector<HotspotIndex> top_actions(std::span<const double> qrow, std::size_t k) {
    std::vector<HotspotIndex> idx(qrow.size());
    std::iota(idx.begin(), idx.end(), HotspotIndex{0});
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](HotspotIndex a, HotspotIndex b) { return qrow[a] != qrow[b] ? qrow[a] > qrow[b] : a < b; });
    idx.resize(k);
    return idx;
}

PreferredActionSet preferred_action_set(const AgentView& d, const QTableSet& tables) {
    const auto& table = tables.for_dest(d.dest);
    return {d.id, d.at, d.dest, top_actions(table.row(d.at), pas_size(table.size()))};
}

bool advances(const QTable& table, HotspotIndex at, HotspotIndex to) {
    if (to == table.dest || to == at) return true;
    if (at == table.dest) return false;
    const auto value = [&](HotspotIndex s) { return table.row(s)[argmax(table.row(s))]; };
    return value(to) > value(at);
}

std::optional<CommonHotspot> common_hotspot(const PreferredActionSet& pas_i, const PreferredActionSet& pas_j,
                                            const QTableSet& tables) {
    std::optional<CommonHotspot> best;
    const auto& t_i = tables.for_dest(pas_i.dest);
    const auto& t_j = tables.for_dest(pas_j.dest);
    const auto nq_i = normalized_q(t_i, pas_i.at);
    const auto nq_j = normalized_q(t_j, pas_j.at);
    for (HotspotIndex a : pas_i.actions) {
        if (std::find(pas_j.actions.begin(), pas_j.actions.end(), a) == pas_j.actions.end()) continue;
        if (!advances(t_i, pas_i.at, a) || !advances(t_j, pas_j.at, a)) continue;
        const double sum = nq_i[a] + nq_j[a];
        if (!best || sum > best->qsum || (sum == best->qsum && a < best->h_com)) best = CommonHotspot{a, sum};
    }
    return best;
}

std::vector<Request> agent_interaction(std::span<const AgentView> pool, const OverlayNetwork& net,
                                       const QTableSet& tables, double r_agent_km) {
    std::vector<const AgentView*> members;
    for (const auto& v : pool)
        if (v.at != v.dest) members.push_back(&v);
    std::sort(members.begin(), members.end(), [](const AgentView* a, const AgentView* b) { return a->id < b->id; });

    std::vector<PreferredActionSet> pas;
    pas.reserve(members.size());
    for (const auto* m : members) pas.push_back(preferred_action_set(*m, tables));

    std::vector<Request> out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (members[i]->id == members[j]->id) throw InvariantViolation("delivery listed twice in interaction pool");
            if (members[i]->at != members[j]->at && net.separation_km(members[i]->at, members[j]->at) > r_agent_km)
                continue;
            if (const auto common = common_hotspot(pas[i], pas[j], tables))
                out.push_back({members[i]->id, members[j]->id, common->h_com, common->qsum});
        }
    }
    return out;
}

void SharingBook::pair(DeliveryId a, DeliveryId b, HotspotIndex meet_at) {
    if (a == b) throw InvariantViolation("a delivery cannot pair with itself");
    if (is_paired(a) || is_paired(b))
        throw InvariantViolation("delivery " + std::to_string(is_paired(a) ? a : b) + " is already paired");
    states_.at(a) = {b, meet_at, false};
    states_.at(b) = {a, meet_at, false};
}

void SharingBook::set_meeting(DeliveryId a, HotspotIndex meet_at, bool co_located) {
    const auto b = partner(a);
    if (!b) throw InvariantViolation("set_meeting on unpaired delivery " + std::to_string(a));
    for (DeliveryId d : {a, *b}) {
        states_.at(d).meet_at = meet_at;
        states_.at(d).co_located = co_located;
    }
}

void SharingBook::unpair(DeliveryId a) {
    const auto b = partner(a);
    states_.at(a) = {};
    if (b) states_.at(*b) = {};
}

void SharingBook::check_symmetry() const {
    for (DeliveryId d = 0; d < states_.size(); ++d) {
        const auto p = states_[d].partner;
        if (!p) continue;
        if (*p >= states_.size() || states_[*p].partner != d)
            throw InvariantViolation("sharing pointers of delivery " + std::to_string(d) + " are not symmetric");
    }
}

std::vector<RequestDecision> handle_requests(std::vector<Request> requests, SharingBook& book) {
    std::sort(requests.begin(), requests.end(), [](const Request& a, const Request& b) {
        if (a.qsum != b.qsum) return a.qsum > b.qsum;
        if (a.d_i != b.d_i) return a.d_i < b.d_i;
        return a.d_j < b.d_j;
    });
    std::vector<RequestDecision> out;
    out.reserve(requests.size());
    for (const auto& r : requests) {
        if (book.is_paired(r.d_i) || book.is_paired(r.d_j)) {
            out.push_back({r, RequestStatus::rejected});
            continue;
        }
        book.pair(r.d_i, r.d_j, r.h_com);
        out.push_back({r, RequestStatus::accepted});
    }
    return out;
}

PairDecision continue_or_split(const AgentView& a, const AgentView& b, SharingBook& book, const QTableSet& tables) {
    if (a.at != b.at)
        throw InvariantViolation("continue_or_split on deliveries " + std::to_string(a.id) + " and " +
                                 std::to_string(b.id) + " at different hotspots");
    if (book.partner(a.id) != b.id) throw InvariantViolation("continue_or_split on deliveries that are not partners");
    if (a.at == a.dest || b.at == b.dest) {
        book.unpair(a.id);
        return {PairOutcome::split_at_destination, 0};
    }
    const auto common = common_hotspot(preferred_action_set(a, tables), preferred_action_set(b, tables), tables);
    if (!common || common->h_com == a.at) {
        book.unpair(a.id);
        return {PairOutcome::split_no_common, 0};
    }
    book.set_meeting(a.id, common->h_com, true);
    return {PairOutcome::continue_shared, common->h_com};
}

HotspotIndex solo_hop(const AgentView& d, const QTableSet& tables) { return argmax(tables.for_dest(d.dest).row(d.at)); }

}  // namespace deliverai
