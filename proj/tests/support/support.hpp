#pragma once

#include <cstdint>
#include <vector>

#include "deliverai/agents.hpp"
#include "deliverai/network.hpp"
#include "deliverai/simulator.hpp"

namespace deliverai::testing {

/// One tract per hotspot (no boundary), with producer "p<i>" and consumer
/// "c<i>" sitting on hotspot i. Distances follow time at 30 km/h.
City fixture_city(const std::vector<GeoPoint>& points, const SquareMatrix& time_s);

/// Random hotspots in the default bounding box, travel time from the
/// great-circle distance times 1.3 at 30 km/h.
City random_clique(std::size_t n, std::uint64_t seed);

/// Single-destination shortest path costs over `w`, by plain O(n^2) Dijkstra.
std::vector<double> dijkstra_to(const SquareMatrix& w, HotspotIndex dest);

double path_cost(const SquareMatrix& w, HotspotIndex start, const std::vector<HotspotIndex>& hops);

/// Fixed point of the Bellman optimality operator for one destination agent,
/// terminal at `dest`.
SquareMatrix value_iteration(const OverlayNetwork& net, HotspotIndex dest, double gamma, double tol = 1e-13);

/// Tables whose argmax at s is next[dest][s] (value 1, everything else 0).
QTableSet scripted_tables(const std::vector<std::vector<HotspotIndex>>& next);

/// The four-delivery staging from the path-sharing illustration: d1 from P
/// and the pair (d2, d3) from S reach hotspot A together; d2/d3 split, d1/d2
/// go on to E, d3 waits at A for d4 (from Q) and the two go on to F.
/// Delivery ids 0..3 are d1..d4.
struct StagedScenario {
    enum : HotspotIndex { A = 0, E = 1, F = 2, S = 3, P = 4, Q = 5 };
    City city;
    QTableSet tables;
    std::vector<Delivery> deliveries;
};

StagedScenario staged_scenario();

/// Distinct CDVs that carried at least one delivery.
std::size_t cdvs_used(const SimResult& result);

}  // namespace deliverai::testing
