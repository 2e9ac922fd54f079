#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numbers>

#include "deliverai/error.hpp"
#include "deliverai/geo.hpp"
#include "deliverai/network.hpp"
#include "deliverai/rng.hpp"
#include "support.hpp"

using namespace deliverai;
using nlohmann::json;

TEST_CASE("haversine identity, symmetry and one degree of longitude on the equator") {
    const GeoPoint a{41.88, -87.63}, b{41.88, -87.62};
    CHECK(haversine_km(a, a) == 0.0);
    CHECK(haversine_km(a, b) == haversine_km(b, a));
    // one degree of arc on a 6371 km sphere
    const double arc = 6371.0 * std::numbers::pi / 180.0;
    CHECK(haversine_km({0, 0}, {0, 1}) == doctest::Approx(arc).epsilon(1e-12));
    CHECK(haversine_km({0, 0}, {0, 1}) == doctest::Approx(111.19).epsilon(1e-4));
}

TEST_CASE("manhattan distance is at least the great-circle distance") {
    const GeoPoint a{41.86, -87.67}, b{41.89, -87.62};
    CHECK(manhattan_km(a, b) >= haversine_km(a, b));
    CHECK(manhattan_km(a, b) == doctest::Approx(manhattan_km(b, a)));
    CHECK(manhattan_km(a, a) == 0.0);
}

namespace {

Site consumer(const std::string& id, GeoPoint p, const std::string& tract) {
    return {id, SiteKind::consumer, p, tract};
}

}  // namespace

TEST_CASE("place_hotspots puts each hotspot on the consumer centroid") {
    SUBCASE("singleton") {
        const auto hs = place_hotspots({{"A", {}}}, {consumer("c", {41.9, -87.7}, "A")});
        REQUIRE(hs.size() == 1);
        CHECK(hs[0].location == GeoPoint{41.9, -87.7});
        CHECK(hs[0].tract == "A");
    }
    SUBCASE("midpoint") {
        const auto hs = place_hotspots({{"A", {}}}, {consumer("c1", {0, 0}, "A"), consumer("c2", {0, 2}, "A")});
        CHECK(hs[0].location.lat == doctest::Approx(0.0));
        CHECK(hs[0].location.lon == doctest::Approx(1.0));
    }
    SUBCASE("random tracts match a direct average; producers are ignored") {
        Rng rng(5);
        std::vector<CensusTract> tracts{{"A", {}}, {"B", {}}, {"C", {}}};
        std::vector<Site> sites;
        double sum_lat[3] = {}, sum_lon[3] = {};
        int count[3] = {};
        for (int i = 0; i < 60; ++i) {
            const int t = static_cast<int>(rng.below(3));
            const GeoPoint p{rng.uniform(41.8, 41.9), rng.uniform(-87.7, -87.6)};
            sites.push_back(consumer("c" + std::to_string(i), p, tracts[t].id));
            sum_lat[t] += p.lat;
            sum_lon[t] += p.lon;
            ++count[t];
        }
        sites.push_back({"p0", SiteKind::producer, {0, 0}, "A"});
        const auto hs = place_hotspots(tracts, sites);
        for (int t = 0; t < 3; ++t) {
            REQUIRE(count[t] > 0);
            CHECK(hs[t].location.lat == doctest::Approx(sum_lat[t] / count[t]).epsilon(1e-12));
            CHECK(hs[t].location.lon == doctest::Approx(sum_lon[t] / count[t]).epsilon(1e-12));
        }
        // order of the site list does not matter, bit for bit
        std::reverse(sites.begin(), sites.end());
        CHECK(place_hotspots(tracts, sites) == hs);
    }
    SUBCASE("tract without consumers names the tract") {
        try {
            place_hotspots({{"A", {}}, {"empty17", {}}}, {consumer("c", {0, 0}, "A")});
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("empty17") != std::string::npos);
        }
    }
}

TEST_CASE("normalize_travel_times") {
    SquareMatrix t(3);
    t(0, 1) = 100;
    t(0, 2) = 200;
    t(1, 0) = 300;
    t(1, 2) = 200;
    t(2, 0) = 100;
    t(2, 1) = 300;
    const auto n = normalize_travel_times(t);
    CHECK(n(0, 1) == 0.0);
    CHECK(n(0, 2) == 0.5);
    CHECK(n(1, 0) == 1.0);
    CHECK(n(2, 1) == 1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(n(i, i) == 0.0);

    SUBCASE("all edges equal map to one half") {
        SquareMatrix flat(4, 60.0);
        for (std::size_t i = 0; i < 4; ++i) flat(i, i) = 0.0;
        const auto f = normalize_travel_times(flat);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(f(i, j) == (i == j ? 0.0 : 0.5));
    }
    SUBCASE("random matrix against a direct min-max") {
        Rng rng(3);
        SquareMatrix r(10);
        double lo = 1e18, hi = -1e18;
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 10; ++j)
                if (i != j) {
                    r(i, j) = rng.uniform(30, 900);
                    lo = std::min(lo, r(i, j));
                    hi = std::max(hi, r(i, j));
                }
        const auto nr = normalize_travel_times(r);
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 10; ++j)
                CHECK(nr(i, j) == doctest::Approx(i == j ? 0.0 : (r(i, j) - lo) / (hi - lo)).epsilon(1e-15));
    }
}

TEST_CASE("synthetic city") {
    const City a = generate_synthetic_city({}, 7);
    SUBCASE("deterministic per seed") {
        CHECK(city_to_json(a) == city_to_json(generate_synthetic_city({}, 7)));
        CHECK(city_to_json(a) != city_to_json(generate_synthetic_city({}, 8)));
    }
    SUBCASE("thirty tracts") {
        CHECK(a.overlay.size() == 30);
        CHECK(std::abs(static_cast<long>(a.sites_of_kind(SiteKind::consumer).size()) - 992) <= 1);
        CHECK(std::abs(static_cast<long>(a.sites_of_kind(SiteKind::producer).size()) - 356) <= 1);
        CHECK_NOTHROW(validate(a));
    }
    SUBCASE("travel times obey the triangle inequality") {
        const auto& net = a.overlay;
        for (std::size_t i = 0; i < net.size(); ++i)
            for (std::size_t j = 0; j < net.size(); ++j)
                for (std::size_t k = 0; k < net.size(); ++k)
                    CHECK(net.time_s(i, k) <= net.time_s(i, j) + net.time_s(j, k) + 1e-9);
    }
    SUBCASE("every site sits inside its tract") {
        for (const auto& s : a.sites) CHECK(a.tracts[a.tract_index(s.tract)].contains(s.location));
    }
    SUBCASE("invalid parameters") {
        SyntheticCityParams p;
        p.n_tracts = 1;
        CHECK_THROWS_AS(generate_synthetic_city(p, 1), ValidationError);
        p = {};
        p.road_factor = 0.5;
        CHECK_THROWS_AS(generate_synthetic_city(p, 1), ValidationError);
    }
}

TEST_CASE("nearest_hotspot") {
    SUBCASE("point on a hotspot") {
        const City c = generate_synthetic_city({}, 7);
        for (const auto& h : c.overlay.hotspots()) CHECK(nearest_hotspot(h.location, c) == h.id);
    }
    SUBCASE("equidistant hotspots 3 and 7 resolve to 3") {
        std::vector<GeoPoint> pts;
        for (int i = 0; i < 10; ++i) pts.push_back({10.0 + i, 10.0});
        pts[3] = {0.0, 1.0};
        pts[7] = {0.0, -1.0};
        SquareMatrix t(10, 100.0);
        for (int i = 0; i < 10; ++i) t(i, i) = 0.0;
        const City c = deliverai::testing::fixture_city(pts, t);
        CHECK(nearest_hotspot({0.0, 0.0}, c) == 3);
    }
    SUBCASE("random points against an exhaustive scan") {
        const City c = generate_synthetic_city({}, 11);
        Rng rng(17);
        for (int k = 0; k < 100; ++k) {
            const GeoPoint p{rng.uniform(41.85, 41.90), rng.uniform(-87.68, -87.61)};
            HotspotIndex best = 0;
            for (HotspotIndex h = 1; h < c.overlay.size(); ++h)
                if (haversine_km(p, c.overlay.hotspot(h).location) < haversine_km(p, c.overlay.hotspot(best).location))
                    best = h;
            CHECK(nearest_hotspot(p, c) == best);
        }
    }
}

TEST_CASE("city files") {
    const City c = generate_synthetic_city({}, 7);
    const auto dir = std::filesystem::temp_directory_path() / "deliverai_unit_city";
    std::filesystem::create_directories(dir);

    SUBCASE("round trip") {
        save_city(c, dir / "city.json");
        const City back = load_city(dir / "city.json");
        CHECK(back == c);
        CHECK(fingerprint(back) == fingerprint(c));
    }
    SUBCASE("negative edge time names the cell") {
        json doc = json::parse(city_to_json(c));
        doc["time_s"][2][5] = -4.0;
        try {
            city_from_json(doc.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("[2][5]") != std::string::npos);
        }
    }
    SUBCASE("handcrafted three-hotspot file keeps matrices bit-exact") {
        const double t01 = 123.456789012345678, d21 = 0.1 + 0.2;
        json doc;
        doc["hotspots"] = json::array();
        doc["sites"] = json::array();
        doc["tracts"] = json::array();
        for (int i = 0; i < 3; ++i) {
            const std::string tract = "T" + std::to_string(i);
            doc["hotspots"].push_back({{"id", i}, {"lat", 41.8 + 0.01 * i}, {"lon", -87.6}, {"tract", tract}});
            doc["tracts"].push_back({{"id", tract}, {"polygon", json::array()}});
        }
        doc["time_s"] = {{0.0, t01, 50.0}, {60.0, 0.0, 70.0}, {80.0, 90.0, 0.0}};
        doc["dist_km"] = {{0.0, 1.0, 2.0}, {3.0, 0.0, 4.0}, {5.0, d21, 0.0}};
        doc["pdv_speed_kmh"] = 30.0;
        doc["road_factor"] = 1.3;
        const City h = city_from_json(doc.dump());
        CHECK(h.overlay.time_s(0, 1) == t01);
        CHECK(h.overlay.dist_km(2, 1) == d21);
        CHECK(h.road_model == RoadModel::haversine);
        CHECK_FALSE(asymmetry_warnings(h.overlay).empty());
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("peripheral and overlay legs") {
    const City c = generate_synthetic_city({}, 7);
    const auto p = c.overlay.hotspot(0).location;
    const auto zero = peripheral_leg(c, p, p);
    CHECK(zero.seconds == 0.0);
    CHECK(zero.km == 0.0);
    const auto q = c.overlay.hotspot(1).location;
    const auto leg = peripheral_leg(c, p, q);
    CHECK(leg.km == doctest::Approx(haversine_km(p, q) * c.road_factor));
    CHECK(leg.seconds == doctest::Approx(leg.km / c.pdv_speed_kmh * 3600.0));
    const auto o = overlay_leg(c.overlay, 3, 4);
    CHECK(o.seconds == c.overlay.time_s(3, 4));
    CHECK(o.km == c.overlay.dist_km(3, 4));
}

TEST_CASE("shortest_time_path matches a Dijkstra oracle") {
    const City c = deliverai::testing::random_clique(12, 4);
    const auto& net = c.overlay;
    for (HotspotIndex dest = 0; dest < net.size(); ++dest) {
        const auto oracle = deliverai::testing::dijkstra_to(net.time_matrix(), dest);
        for (HotspotIndex s = 0; s < net.size(); ++s) {
            if (s == dest) continue;
            const auto path = shortest_time_path(net, s, dest);
            REQUIRE(!path.empty());
            CHECK(path.back() == dest);
            CHECK(deliverai::testing::path_cost(net.time_matrix(), s, path) == doctest::Approx(oracle[s]));
        }
    }
}
