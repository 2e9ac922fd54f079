#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "deliverai/geo.hpp"
#include "deliverai/rng.hpp"

namespace deliverai::testing {

City fixture_city(const std::vector<GeoPoint>& points, const SquareMatrix& time_s) {
    const std::size_t n = points.size();
    City city;
    std::vector<Hotspot> hotspots;
    SquareMatrix dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string tract = "t" + std::to_string(i);
        city.tracts.push_back({tract, {}});
        hotspots.push_back({i, points[i], tract});
        city.sites.push_back({"p" + std::to_string(i), SiteKind::producer, points[i], tract});
        city.sites.push_back({"c" + std::to_string(i), SiteKind::consumer, points[i], tract});
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) dist(i, j) = time_s(i, j) * 30.0 / 3600.0;
    }
    city.overlay = OverlayNetwork(std::move(hotspots), time_s, dist);
    return city;
}

City random_clique(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const BoundingBox box;
    std::vector<GeoPoint> points;
    for (std::size_t i = 0; i < n; ++i)
        points.push_back({rng.uniform(box.lat_min, box.lat_max), rng.uniform(box.lon_min, box.lon_max)});
    SquareMatrix time(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) time(i, j) = std::max(1.0, haversine_km(points[i], points[j]) * 1.3 / 30.0 * 3600.0);
    return fixture_city(points, time);
}

std::vector<double> dijkstra_to(const SquareMatrix& w, HotspotIndex dest) {
    const std::size_t n = w.size();
    std::vector<double> cost(n, std::numeric_limits<double>::infinity());
    std::vector<bool> done(n, false);
    cost[dest] = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && (u == n || cost[v] < cost[u])) u = v;
        done[u] = true;
        // relax edges into u
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && v != u) cost[v] = std::min(cost[v], w(v, u) + cost[u]);
    }
    return cost;
}

double path_cost(const SquareMatrix& w, HotspotIndex start, const std::vector<HotspotIndex>& hops) {
    double c = 0.0;
    HotspotIndex at = start;
    for (HotspotIndex h : hops) {
        c += w(at, h);
        at = h;
    }
    return c;
}

SquareMatrix value_iteration(const OverlayNetwork& net, HotspotIndex dest, double gamma, double tol) {
    const std::size_t n = net.size();
    SquareMatrix q(n);
    std::vector<double> v(n, 0.0);
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double delta = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (s == dest) continue;
            for (std::size_t a = 0; a < n; ++a) {
                const double target = reward(dest, s, a, net) + (a == dest ? 0.0 : gamma * v[a]);
                delta = std::max(delta, std::abs(target - q(s, a)));
                q(s, a) = target;
            }
        }
        for (std::size_t s = 0; s < n; ++s)
            if (s != dest) v[s] = *std::max_element(q.row(s).begin(), q.row(s).end());
        if (delta < tol) break;
    }
    return q;
}

QTableSet scripted_tables(const std::vector<std::vector<HotspotIndex>>& next) {
    const std::size_t n = next.size();
    std::vector<QTable> tables;
    for (HotspotIndex dest = 0; dest < n; ++dest) {
        QTable t{dest, SquareMatrix(n)};
        for (HotspotIndex s = 0; s < n; ++s) {
            if (s == dest) continue;
            // values grow toward the destination so every scripted hop counts as progress
            std::size_t hops = 0;
            for (HotspotIndex at = s; at != dest; at = next[dest][at]) ++hops;
            t.q(s, next[dest][s]) = 1.0 - 0.1 * static_cast<double>(hops);
        }
        tables.push_back(std::move(t));
    }
    return QTableSet(std::move(tables));
}

StagedScenario staged_scenario() {
    using SS = StagedScenario;
    constexpr std::size_t n = 10;  // pas size 1
    std::vector<GeoPoint> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back({41.80 + 0.02 * static_cast<double>(i), -87.65});

    SquareMatrix time(n, 600.0);
    for (std::size_t i = 0; i < n; ++i) time(i, i) = 0.0;
    time(SS::S, SS::A) = 220.0;
    time(SS::P, SS::A) = 100.0;
    time(SS::Q, SS::A) = 140.0;
    time(SS::A, SS::E) = 200.0;
    time(SS::A, SS::F) = 200.0;

    std::vector<std::vector<HotspotIndex>> next(n, std::vector<HotspotIndex>(n));
    for (HotspotIndex dest = 0; dest < n; ++dest)
        for (HotspotIndex s = 0; s < n; ++s) next[dest][s] = dest;
    for (HotspotIndex dest : {SS::E, SS::F})
        for (HotspotIndex s : {SS::S, SS::P, SS::Q}) next[dest][s] = SS::A;

    SS out;
    out.city = fixture_city(points, time);
    out.tables = scripted_tables(next);
    auto delivery = [](DeliveryId id, HotspotIndex src, HotspotIndex dest) {
        return Delivery{id, "p" + std::to_string(src), "c" + std::to_string(dest), src, dest, 0};
    };
    out.deliveries = {delivery(0, SS::P, SS::E), delivery(1, SS::S, SS::E), delivery(2, SS::S, SS::F),
                      delivery(3, SS::Q, SS::F)};
    return out;
}

std::size_t cdvs_used(const SimResult& result) {
    std::set<VehicleId> ids;
    for (const auto& leg : result.legs)
        if (leg.kind == VehicleKind::cdv && leg.carrying()) ids.insert(leg.vehicle);
    return ids.size();
}

}  // namespace deliverai::testing
