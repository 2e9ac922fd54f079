#include "deliverai/simulator.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "deliverai/error.hpp"

namespace deliverai {

const char* to_string(SimMode mode) {
    switch (mode) {
        case SimMode::deliverai: return "deliverai";
        case SimMode::baseline1: return "baseline1";
        case SimMode::baseline2: return "baseline2";
    }
    return "?";
}

SimMode sim_mode_from_string(const std::string& s) {
    if (s == "deliverai") return SimMode::deliverai;
    if (s == "baseline1") return SimMode::baseline1;
    if (s == "baseline2") return SimMode::baseline2;
    throw ValidationError("unknown mode '" + s + "' (expected deliverai, baseline1 or baseline2)");
}

void validate(const SimConfig& cfg) {
    if (cfg.tick_s <= 0) throw ValidationError("tick must be a positive number of seconds");
    if (!(cfg.r_agent_km >= 0.0)) throw ValidationError("r_agent must be non-negative");
    if (cfg.tau_s <= 0) throw ValidationError("tau must be positive");
    if (cfg.stable_to_s <= cfg.stable_from_s) throw ValidationError("stable window is empty");
    if (cfg.max_hold_s < 0) throw ValidationError("max_hold must be non-negative");
}

namespace {

// no run should need more than this many simulated seconds past the last start
constexpr Tick kRunaway = 7 * 24 * 3600;

using Arrival = std::pair<Tick, std::size_t>;  // (arrive, leg id)
using ArrivalQueue = std::priority_queue<Arrival, std::vector<Arrival>, std::greater<>>;

void check_inputs(const City& city, const std::vector<Delivery>& deliveries, const SimConfig& cfg) {
    validate(cfg);
    const auto n = city.overlay.size();
    for (std::size_t i = 0; i < deliveries.size(); ++i) {
        const auto& d = deliveries[i];
        if (d.src >= n || d.dest >= n) throw ValidationError("delivery " + std::to_string(d.id) + " names an unknown hotspot");
        if (i > 0 && d.start_s < deliveries[i - 1].start_s) throw ValidationError("deliveries must be sorted by start time");
        if (d.start_s < 0) throw ValidationError("delivery " + std::to_string(d.id) + " starts before time zero");
    }
}

std::vector<DeliveryRecord> fresh_records(const std::vector<Delivery>& deliveries) {
    std::vector<DeliveryRecord> out;
    out.reserve(deliveries.size());
    for (const auto& d : deliveries) {
        DeliveryRecord r;
        r.id = d.id;
        r.producer = d.producer;
        r.consumer = d.consumer;
        r.src = d.src;
        r.dest = d.dest;
        r.start_s = d.start_s;
        out.push_back(std::move(r));
    }
    return out;
}

// Hub-and-spoke engine shared by DeliverAI (sharing on) and baseline 2
// (sharing off, one direct overlay leg).
class HubEngine {
public:
    HubEngine(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries, const SimConfig& cfg,
              bool q_routing, bool sharing)
        : city_(city), net_(city.overlay), tables_(tables), deliveries_(deliveries), cfg_(cfg), q_routing_(q_routing),
          sharing_(q_routing && sharing),
          book_(deliveries.size()), rt_(deliveries.size()), records_(fresh_records(deliveries)) {
        check_inputs(city, deliveries, cfg);
        const auto n = net_.size();
        if (q_routing_ && tables_.size() != n)
            throw ValidationError("Q-tables cover " + std::to_string(tables_.size()) + " hotspots, city has " +
                                  std::to_string(n));
        hop_cap_ = cfg.max_overlay_hops ? cfg.max_overlay_hops : 2 * n;
        for (HotspotIndex h = 0; h < n; ++h) hotspot_tract_.push_back(city.tract_index(net_.hotspot(h).tract));
        for (const auto& d : deliveries) {
            producers_.push_back(&city.site(d.producer));
            consumers_.push_back(&city.site(d.consumer));
        }
        if (q_routing_) {
            greedy_ok_.assign(n * n, false);
            for (HotspotIndex dest = 0; dest < n; ++dest)
                for (HotspotIndex s = 0; s < n; ++s) {
                    if (s == dest) continue;
                    try {
                        greedy_path(tables_.for_dest(dest), s);
                        greedy_ok_[dest * n + s] = true;
                    } catch (const CycleError&) {
                    }
                }
        }
    }

    SimResult run() {
        SimResult out;
        out.mode = cfg_.mode;
        out.config = cfg_;
        const std::size_t n = deliveries_.size();
        std::size_t next = 0;
        Tick t = 0;
        while (done_ < n) {
            complete_arrivals(t);
            while (next < n && deliveries_[next].start_s <= t) start_first_mile(next++, t);
            if (sharing_) {
                synchronize();
                interact(t);
            }
            dispatch(t);
            ledger_.sample(t);
            if (done_ == n) break;
            if (next == n && t > deliveries_.back().start_s + kRunaway)
                throw InvariantViolation("simulation did not drain by t=" + std::to_string(t));
            t += cfg_.tick_s;
        }
        book_.check_symmetry();
        diag_.last_tick = t;
        out.deliveries = std::move(records_);
        out.legs = ledger_.legs();
        out.active_series = ledger_.active_series();
        out.peaks = ledger_.peaks();
        out.requests = std::move(log_);
        out.diagnostics = diag_;
        return out;
    }

private:
    enum class Phase { pending, in_transit, at_hotspot, done };

    struct Runtime {
        Phase phase = Phase::pending;
        HotspotIndex at = 0;
        Tick arrived = 0;
        Tick hold_until = 0;
        Tick waited = 0;
        std::size_t overlay_hops = 0;
        bool solo_only = false;
    };

    AgentView view(std::size_t m) const {
        return {static_cast<DeliveryId>(m), rt_[m].at, deliveries_[m].dest};
    }

    void complete_arrivals(Tick t) {
        while (!arrivals_.empty() && arrivals_.top().first <= t) {
            const std::size_t leg_id = arrivals_.top().second;
            arrivals_.pop();
            ledger_.complete_leg(leg_id);
            const Leg& leg = ledger_.legs()[leg_id];
            for (DeliveryId m : leg.payload) {
                if (leg.to.type == Endpoint::Type::site)
                    finish(m, t);
                else
                    arrive_hotspot(m, leg.to.hotspot, t);
            }
        }
    }

    void arrive_hotspot(std::size_t m, HotspotIndex h, Tick t) {
        auto& r = rt_[m];
        r.phase = Phase::at_hotspot;
        r.at = h;
        r.arrived = t;
        r.hold_until = t + std::max<Tick>(0, cfg_.max_hold_s - r.waited);
        if (r.overlay_hops >= hop_cap_ && !r.solo_only) {
            r.solo_only = true;
            ++diag_.hop_cap_hits;
        }
        at_hotspot_.push_back(m);
    }

    void finish(std::size_t m, Tick t) {
        rt_[m].phase = Phase::done;
        records_[m].end_s = t;
        if (book_.is_paired(static_cast<DeliveryId>(m))) book_.unpair(static_cast<DeliveryId>(m));
        ++done_;
    }

    void start_first_mile(std::size_t m, Tick t) {
        const Site& p = *producers_[m];
        const HotspotIndex src = deliveries_[m].src;
        const Hotspot& h = net_.hotspot(src);
        const LocationKey origin{VehicleKind::pdv, city_.tract_index(p.tract)};
        const LocationKey dest{VehicleKind::pdv, hotspot_tract_[src]};
        const auto cost = peripheral_leg(city_, p.location, h.location);
        const Tick dur = leg_ticks(cost.seconds, cfg_.tick_s);
        records_[m].wait_s += t - deliveries_[m].start_s;
        records_[m].path.push_back(Endpoint::at_hotspot(src));
        const VehicleId v = ledger_.acquire(VehicleKind::pdv, origin, p.location);
        const auto leg = ledger_.start_leg(v, Endpoint::at_site(p.id), Endpoint::at_hotspot(src), h.location, origin,
                                           dest, t, dur, cost.km, {static_cast<DeliveryId>(m)});
        rt_[m].phase = Phase::in_transit;
        if (dur == 0) {
            ledger_.complete_leg(leg);
            arrive_hotspot(m, src, t);
        } else {
            arrivals_.emplace(t + dur, leg);
        }
    }

    void start_last_mile(std::size_t m, Tick t) {
        auto& r = rt_[m];
        const Site& c = *consumers_[m];
        const Hotspot& h = net_.hotspot(r.at);
        const LocationKey origin{VehicleKind::pdv, hotspot_tract_[r.at]};
        const LocationKey dest{VehicleKind::pdv, city_.tract_index(c.tract)};
        const auto cost = peripheral_leg(city_, h.location, c.location);
        const Tick dur = leg_ticks(cost.seconds, cfg_.tick_s);
        records_[m].wait_s += t - r.arrived;
        records_[m].path.push_back(Endpoint::at_site(c.id));
        const VehicleId v = ledger_.acquire(VehicleKind::pdv, origin, h.location);
        const auto leg = ledger_.start_leg(v, Endpoint::at_hotspot(r.at), Endpoint::at_site(c.id), c.location, origin,
                                           dest, t, dur, cost.km, {static_cast<DeliveryId>(m)});
        r.phase = Phase::in_transit;
        if (dur == 0) {
            ledger_.complete_leg(leg);
            finish(m, t);
        } else {
            arrivals_.emplace(t + dur, leg);
        }
    }

    // Returns the leg id and its duration.
    std::pair<std::size_t, Tick> depart_overlay(std::vector<DeliveryId> payload, HotspotIndex to, Tick t) {
        const HotspotIndex from = rt_[payload.front()].at;
        for (DeliveryId m : payload) {
            if (rt_[m].at != from) throw InvariantViolation("shared leg members are not co-located");
            records_[m].wait_s += t - rt_[m].arrived;
            rt_[m].waited += t - rt_[m].arrived;
            records_[m].path.push_back(Endpoint::at_hotspot(to));
            if (payload.size() == 2) ++records_[m].shared_legs;
            ++rt_[m].overlay_hops;
            rt_[m].phase = Phase::in_transit;
        }
        if (payload.size() == 2) ++diag_.shared_legs;
        const LocationKey origin{VehicleKind::cdv, from};
        const LocationKey dest{VehicleKind::cdv, to};
        const auto cost = overlay_leg(net_, from, to);
        const Tick dur = leg_ticks(cost.seconds, cfg_.tick_s);
        const VehicleId v = ledger_.acquire(VehicleKind::cdv, origin, net_.hotspot(from).location);
        const auto leg = ledger_.start_leg(v, Endpoint::at_hotspot(from), Endpoint::at_hotspot(to),
                                           net_.hotspot(to).location, origin, dest, t, dur, cost.km, std::move(payload));
        if (dur > 0) arrivals_.emplace(t + dur, leg);
        return {leg, dur};
    }

    // Pairs waiting at their meeting point either move on together or split.
    void synchronize() {
        std::sort(at_hotspot_.begin(), at_hotspot_.end());
        for (std::size_t m : at_hotspot_) {
            const auto id = static_cast<DeliveryId>(m);
            const auto p = book_.partner(id);
            if (!p) continue;
            const bool together = rt_[*p].phase == Phase::at_hotspot && rt_[*p].at == rt_[m].at;
            if (!together) {
                // no point waiting for a partner we can no longer travel with
                if (rt_[m].at == deliveries_[m].dest || rt_[m].solo_only) book_.unpair(id);
                continue;
            }
            if (*p < m) continue;
            if (rt_[m].solo_only || rt_[*p].solo_only) {
                book_.unpair(id);
                continue;
            }
            const auto decision = continue_or_split(view(m), view(*p), book_, tables_);
            if (decision.outcome == PairOutcome::continue_shared) moving_pairs_.push_back({id, *p, decision.next});
        }
    }

    void interact(Tick t) {
        std::vector<AgentView> pool;
        for (std::size_t m : at_hotspot_) {
            const auto& r = rt_[m];
            if (r.phase != Phase::at_hotspot || r.solo_only || r.at == deliveries_[m].dest) continue;
            if (book_.is_paired(static_cast<DeliveryId>(m))) continue;
            pool.push_back(view(m));
        }
        if (pool.size() < 2) return;
        auto requests = agent_interaction(pool, net_, tables_, cfg_.r_agent_km);
        // co-located pairs whose best common move is to stay would never leave
        std::erase_if(requests, [&](const Request& q) {
            const bool stall = rt_[q.d_i].at == rt_[q.d_j].at && q.h_com == rt_[q.d_i].at;
            if (stall) log_.push_back({t, q, RequestStatus::discarded});
            return stall;
        });
        for (const auto& decision : handle_requests(std::move(requests), book_)) {
            log_.push_back({t, decision.request, decision.status});
            if (decision.status != RequestStatus::accepted) continue;
            ++diag_.pairs_formed;
            const auto& q = decision.request;
            const bool co_located = rt_[q.d_i].at == rt_[q.d_j].at;
            book_.set_meeting(q.d_i, q.h_com, co_located);
            if (co_located) {
                moving_pairs_.push_back({q.d_i, q.d_j, q.h_com});
                continue;
            }
            for (DeliveryId m : {q.d_i, q.d_j})
                if (rt_[m].at != q.h_com) depart_overlay({m}, q.h_com, t);
        }
    }

    HotspotIndex solo_next(std::size_t m) {
        const auto& r = rt_[m];
        const auto n = net_.size();
        if (!r.solo_only && greedy_ok_[deliveries_[m].dest * n + r.at]) return solo_hop(view(m), tables_);
        ++diag_.fallback_routes;
        return shortest_time_path(net_, r.at, deliveries_[m].dest).front();
    }

    void dispatch(Tick t) {
        for (const auto& mp : moving_pairs_) depart_overlay({mp.a, mp.b}, mp.to, t);
        moving_pairs_.clear();

        auto current = at_hotspot_;
        std::sort(current.begin(), current.end());
        for (std::size_t m : current) {
            auto& r = rt_[m];
            if (r.phase != Phase::at_hotspot) continue;
            if (book_.is_paired(static_cast<DeliveryId>(m))) continue;
            const HotspotIndex dest = deliveries_[m].dest;
            if (r.at == dest && (q_routing_ || r.overlay_hops > 0)) {
                start_last_mile(m, t);
                continue;
            }
            if (!q_routing_) {
                // the overlay leg is logged even when src == dest so every
                // journey is exactly three hops
                const auto [leg, dur] = depart_overlay({static_cast<DeliveryId>(m)}, dest, t);
                if (dur == 0) {
                    ledger_.complete_leg(leg);
                    r.at = dest;
                    r.arrived = t;
                    start_last_mile(m, t);
                }
                continue;
            }
            if (sharing_ && !r.solo_only && t < r.hold_until) continue;
            depart_overlay({static_cast<DeliveryId>(m)}, solo_next(m), t);
        }
        std::erase_if(at_hotspot_, [&](std::size_t m) { return rt_[m].phase != Phase::at_hotspot; });
    }

    struct MovingPair {
        DeliveryId a;
        DeliveryId b;
        HotspotIndex to;
    };

    const City& city_;
    const OverlayNetwork& net_;
    const QTableSet& tables_;
    const std::vector<Delivery>& deliveries_;
    SimConfig cfg_;
    bool q_routing_;  // Q-table hops; otherwise the direct src -> dest edge
    bool sharing_;
    std::size_t hop_cap_ = 0;

    FleetLedger ledger_;
    SharingBook book_;
    ArrivalQueue arrivals_;
    std::vector<Runtime> rt_;
    std::vector<DeliveryRecord> records_;
    std::vector<std::size_t> at_hotspot_;
    std::vector<MovingPair> moving_pairs_;
    std::vector<RequestLogEntry> log_;
    SimDiagnostics diag_;
    std::size_t done_ = 0;

    std::vector<std::size_t> hotspot_tract_;
    std::vector<const Site*> producers_;
    std::vector<const Site*> consumers_;
    std::vector<bool> greedy_ok_;
};

}  // namespace

SimResult run_deliverai(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                        const SimConfig& cfg) {
    SimConfig c = cfg;
    c.mode = SimMode::deliverai;
    return HubEngine(city, tables, deliveries, c, true, c.path_sharing).run();
}

SimResult run_baseline2(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                        const SimConfig& cfg) {
    SimConfig c = cfg;
    c.mode = SimMode::baseline2;
    return HubEngine(city, tables, deliveries, c, false, false).run();
}

SimResult run_baseline1(const City& city, const std::vector<Delivery>& deliveries, const SimConfig& cfg) {
    check_inputs(city, deliveries, cfg);
    SimResult out;
    out.mode = SimMode::baseline1;
    out.config = cfg;
    out.config.mode = SimMode::baseline1;
    out.deliveries = fresh_records(deliveries);

    FleetLedger ledger;
    ArrivalQueue arrivals;
    std::vector<Endpoint> last_stop;  // per vehicle
    std::vector<std::size_t> carrying_for;  // approach leg id -> delivery, SIZE_MAX if none
    const std::size_t n = deliveries.size();
    std::size_t next = 0;
    std::size_t done = 0;

    auto start_carry = [&](std::size_t m, VehicleId v, Tick t) {
        const Site& p = city.site(deliveries[m].producer);
        const Site& c = city.site(deliveries[m].consumer);
        const LocationKey origin{VehicleKind::pdv, city.tract_index(p.tract)};
        const LocationKey dest{VehicleKind::pdv, city.tract_index(c.tract)};
        const auto cost = peripheral_leg(city, p.location, c.location);
        const Tick dur = leg_ticks(cost.seconds, cfg.tick_s);
        out.deliveries[m].path.push_back(Endpoint::at_site(c.id));
        const auto leg = ledger.start_leg(v, Endpoint::at_site(p.id), Endpoint::at_site(c.id), c.location, origin,
                                          dest, t, dur, cost.km, {static_cast<DeliveryId>(m)});
        last_stop.resize(ledger.vehicles().size());
        last_stop[v] = Endpoint::at_site(c.id);
        if (dur == 0) {
            ledger.complete_leg(leg);
            out.deliveries[m].end_s = t;
            ++done;
        } else {
            arrivals.emplace(t + dur, leg);
        }
    };

    Tick t = 0;
    while (done < n) {
        while (!arrivals.empty() && arrivals.top().first <= t) {
            const std::size_t leg_id = arrivals.top().second;
            arrivals.pop();
            ledger.complete_leg(leg_id);
            const Leg& leg = ledger.legs()[leg_id];
            if (leg.carrying()) {
                out.deliveries[leg.payload.front()].end_s = t;
                ++done;
            } else {
                ledger.claim(leg.vehicle);
                start_carry(carrying_for.at(leg_id), leg.vehicle, t);
            }
        }
        while (next < n && deliveries[next].start_s <= t) {
            const std::size_t m = next++;
            const Site& p = city.site(deliveries[m].producer);
            const LocationKey loc{VehicleKind::pdv, city.tract_index(p.tract)};
            const VehicleId v = ledger.acquire_nearest(VehicleKind::pdv, loc, p.location);
            last_stop.resize(ledger.vehicles().size(), Endpoint::at_site(p.id));
            const auto approach = peripheral_leg(city, ledger.vehicles()[v].position, p.location);
            const Tick dur = leg_ticks(approach.seconds, cfg.tick_s);
            out.deliveries[m].wait_s = (t - deliveries[m].start_s) + dur;
            if (dur == 0) {
                start_carry(m, v, t);
                continue;
            }
            const auto leg = ledger.start_leg(v, last_stop[v], Endpoint::at_site(p.id), p.location, loc, loc, t, dur,
                                              approach.km, {});
            carrying_for.resize(leg + 1, SIZE_MAX);
            carrying_for[leg] = m;
            arrivals.emplace(t + dur, leg);
        }
        ledger.sample(t);
        if (done == n) break;
        if (next == n && t > deliveries.back().start_s + kRunaway)
            throw InvariantViolation("simulation did not drain by t=" + std::to_string(t));
        t += cfg.tick_s;
    }
    out.legs = ledger.legs();
    out.active_series = ledger.active_series();
    out.peaks = ledger.peaks();
    out.diagnostics.last_tick = t;
    return out;
}

SimResult simulate(const City& city, const QTableSet& tables, const std::vector<Delivery>& deliveries,
                   const SimConfig& cfg) {
    switch (cfg.mode) {
        case SimMode::deliverai: return run_deliverai(city, tables, deliveries, cfg);
        case SimMode::baseline1: return run_baseline1(city, deliveries, cfg);
        case SimMode::baseline2: return run_baseline2(city, tables, deliveries, cfg);
    }
    throw ValidationError("unknown simulation mode");
}

}  // namespace deliverai
