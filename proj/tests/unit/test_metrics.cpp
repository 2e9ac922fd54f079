#include <doctest.h>

#include <filesystem>

#include "deliverai/error.hpp"
#include "deliverai/metrics.hpp"
#include "support.hpp"

using namespace deliverai;

namespace {

// Hand-made result: one delivery, PDV 100 s, CDV 400 s, PDV 100 s.
SimResult single_journey() {
    SimResult r;
    r.config.tau_s = 900;
    r.config.stable_from_s = 0;
    r.config.stable_to_s = 10000;
    DeliveryRecord d;
    d.id = 0;
    d.start_s = 0;
    d.end_s = 600;
    d.path = {Endpoint::at_hotspot(0), Endpoint::at_hotspot(1), Endpoint::at_site("c")};
    r.deliveries = {d};
    const LocationKey t0{VehicleKind::pdv, 0}, h0{VehicleKind::cdv, 0}, h1{VehicleKind::cdv, 1},
        t1{VehicleKind::pdv, 1};
    r.legs = {Leg{0, 0, VehicleKind::pdv, t0, t0, {}, {}, 0, 100, 1.0, {0}},
              Leg{1, 1, VehicleKind::cdv, h0, h1, {}, {}, 100, 500, 3.0, {0}},
              Leg{2, 2, VehicleKind::pdv, t1, t1, {}, {}, 500, 600, 1.5, {0}}};
    r.peaks = replay_peaks(r.legs);
    for (Tick t = 0; t <= 600; ++t) {
        std::size_t active = 0;
        for (const auto& [loc, n] : snapshot_active(r.legs, t)) active += n;
        r.active_series.emplace_back(t, active);
    }
    return r;
}

Provenance prov(std::uint64_t city = 1, std::uint64_t load = 2) { return {"x", "uniform", 5, 1, city, load}; }

}  // namespace

TEST_CASE("single journey arithmetic") {
    const auto m = compute_metrics(single_journey(), prov());
    CHECK(m.n_deliveries == 1);
    CHECK(m.dist_tot_km == 5.5);
    CHECK(m.time_avg_s == 600.0);
    CHECK(m.veh_tot == 3);
    CHECK(m.hops_avg == 3.0);
    CHECK(m.succ_ratio == 1.0);
    // one vehicle active out of three for ticks 0..599, none at 600
    CHECK(m.ur_avg == doctest::Approx(600.0 / 601.0 / 3.0));
    for (double ur : m.ur_series) {
        CHECK(ur >= 0.0);
        CHECK(ur <= 1.0);
    }
}

TEST_CASE("succ uses the tau threshold inclusively") {
    auto r = single_journey();
    r.config.tau_s = 599;
    CHECK(compute_metrics(r, prov()).succ_ratio == 0.0);
    r.config.tau_s = 600;
    CHECK(compute_metrics(r, prov()).succ_ratio == 1.0);
}

TEST_CASE("stable window bounds the UR average") {
    auto r = single_journey();
    r.config.stable_from_s = 700;
    r.config.stable_to_s = 800;
    CHECK(compute_metrics(r, prov()).ur_avg == 0.0);
    r.config.stable_from_s = 100;
    r.config.stable_to_s = 200;
    CHECK(compute_metrics(r, prov()).ur_avg == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("incomplete traces are refused with the ids") {
    auto r = single_journey();
    DeliveryRecord open;
    open.id = 41;
    r.deliveries.push_back(open);
    try {
        compute_metrics(r, prov());
        FAIL("expected IncompleteTraceError");
    } catch (const IncompleteTraceError& e) {
        CHECK(std::string(e.what()).find("41") != std::string::npos);
    }
}

TEST_CASE("compare") {
    MetricsReport a, b;
    a.provenance = b.provenance = prov();
    a.dist_tot_km = 87;
    b.dist_tot_km = 100;
    a.veh_tot = 90;
    b.veh_tot = 100;
    a.time_avg_s = 113;
    b.time_avg_s = 100;
    a.ur_avg = 0.5;
    b.ur_avg = 0.4;
    a.succ_ratio = 0.95;
    b.succ_ratio = 1.0;
    const auto d = compare(a, b);
    CHECK(d.dist_pct_decrease == doctest::Approx(13.0));
    CHECK(d.veh_pct_decrease == doctest::Approx(10.0));
    CHECK(d.time_pct_increase == doctest::Approx(13.0));
    CHECK(d.ur_pp == doctest::Approx(10.0));
    CHECK(d.succ_pp == doctest::Approx(-5.0));

    const auto same = compare(a, a);
    CHECK(same.dist_pct_decrease == 0.0);
    CHECK(same.veh_pct_decrease == 0.0);
    CHECK(same.time_pct_increase == 0.0);
    CHECK(same.ur_pp == 0.0);
    CHECK(same.succ_pp == 0.0);

    b.provenance.city_fingerprint = 99;
    CHECK_THROWS_AS(compare(a, b), ValidationError);
    b.provenance = prov(1, 3);
    CHECK_THROWS_AS(compare(a, b), ValidationError);
}

TEST_CASE("metrics csv round trip is exact") {
    const City c = generate_synthetic_city({}, 7);
    const auto ds = generate_deliveries({LoadKind::uniform, 5}, c, 1);
    SimConfig cfg;
    cfg.mode = SimMode::baseline1;
    const auto r = simulate(c, {}, ds, cfg);
    const auto m = compute_metrics(r, {"baseline1", "uniform", 5, 1, fingerprint(c), fingerprint(ds)});
    const auto path = std::filesystem::temp_directory_path() / "deliverai_unit_metrics.csv";
    write_metrics_csv({m, m}, path);
    const auto back = read_metrics_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].dist_tot_km == m.dist_tot_km);
    CHECK(back[0].time_avg_s == m.time_avg_s);
    CHECK(back[0].ur_avg == m.ur_avg);
    CHECK(back[0].veh_tot == m.veh_tot);
    CHECK(back[0].provenance.city_fingerprint == m.provenance.city_fingerprint);
    CHECK(back[0].provenance.load_fingerprint == m.provenance.load_fingerprint);
    std::filesystem::remove(path);
}
