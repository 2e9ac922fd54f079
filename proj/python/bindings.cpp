#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "deliverai/agents.hpp"
#include "deliverai/error.hpp"
#include "deliverai/metrics.hpp"
#include "deliverai/simulator.hpp"
#include "deliverai/version.hpp"

namespace py = pybind11;
using namespace deliverai;

namespace {

py::dict to_dict(const MetricsReport& m) {
    py::dict d;
    d["mode"] = m.provenance.mode;
    d["n_deliveries"] = m.n_deliveries;
    d["dist_tot_km"] = m.dist_tot_km;
    d["time_avg_s"] = m.time_avg_s;
    d["veh_tot"] = m.veh_tot;
    d["hops_avg"] = m.hops_avg;
    d["ur_avg"] = m.ur_avg;
    d["succ_ratio"] = m.succ_ratio;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DeliverAI simulator core";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IncompleteTraceError>(m, "IncompleteTraceError", PyExc_RuntimeError);

    py::class_<City>(m, "City")
        .def_property_readonly("n_hotspots", [](const City& c) { return c.overlay.size(); })
        .def_property_readonly("n_sites", [](const City& c) { return c.sites.size(); })
        .def_property_readonly("fingerprint", [](const City& c) { return fingerprint(c); })
        .def("time_s", [](const City& c, HotspotIndex i, HotspotIndex j) { return c.overlay.time_s(i, j); })
        .def("to_json", &city_to_json)
        .def("save", [](const City& c, const std::filesystem::path& p) { save_city(c, p); });

    m.def(
        "generate_city",
        [](std::size_t tracts, std::uint64_t seed) {
            SyntheticCityParams params;
            params.n_tracts = tracts;
            return generate_synthetic_city(params, seed);
        },
        py::arg("tracts") = 30, py::arg("seed") = 1);
    m.def("load_city", &load_city, py::arg("path"));

    py::class_<QTableSet>(m, "Tables")
        .def("__len__", &QTableSet::size)
        .def("q", [](const QTableSet& t, HotspotIndex dest, HotspotIndex s, HotspotIndex a) {
            return t.for_dest(dest).q(s, a);
        })
        .def("greedy_path", [](const QTableSet& t, HotspotIndex start, HotspotIndex dest) {
            return greedy_path(t.for_dest(dest), start);
        });

    m.def(
        "train",
        [](const City& city, const std::string& policy, std::size_t episodes, std::uint64_t seed, unsigned threads) {
            TrainingConfig cfg;
            if (policy == "epsilon")
                cfg.policy = EpsilonGreedyPolicy{};
            else if (policy != "boltzmann")
                throw ValidationError("policy must be boltzmann or epsilon");
            cfg.episodes = episodes;
            cfg.seed = seed;
            py::gil_scoped_release release;
            return to_table_set(train_all(city.overlay, cfg, threads));
        },
        py::arg("city"), py::arg("policy") = "boltzmann", py::arg("episodes") = 20000, py::arg("seed") = 1,
        py::arg("threads") = 1);
    m.def("load_tables", [](const std::filesystem::path& dir) { return load_bundle(dir).tables; }, py::arg("dir"));

    py::class_<Delivery>(m, "Delivery")
        .def_readonly("id", &Delivery::id)
        .def_readonly("producer", &Delivery::producer)
        .def_readonly("consumer", &Delivery::consumer)
        .def_readonly("src", &Delivery::src)
        .def_readonly("dest", &Delivery::dest)
        .def_readonly("start_s", &Delivery::start_s);

    m.def(
        "generate_deliveries",
        [](const City& city, const std::string& profile, unsigned l0, std::uint64_t seed) {
            return generate_deliveries({load_kind_from_string(profile), l0}, city, seed);
        },
        py::arg("city"), py::arg("profile") = "uniform", py::arg("l0") = 5, py::arg("seed") = 1);

    py::class_<SimResult>(m, "SimResult")
        .def_property_readonly("n_legs", [](const SimResult& r) { return r.legs.size(); })
        .def_property_readonly("pairs_formed", [](const SimResult& r) { return r.diagnostics.pairs_formed; })
        .def_property_readonly("shared_legs", [](const SimResult& r) { return r.diagnostics.shared_legs; })
        .def("save", [](const SimResult& r, const std::filesystem::path& dir, const City& city) {
            save_result_bundle(dir, r, city, {});
        });

    m.def(
        "simulate",
        [](const City& city, const std::vector<Delivery>& deliveries, const std::string& mode,
           const std::optional<QTableSet>& tables, bool path_sharing, Tick max_hold_s) {
            SimConfig cfg;
            cfg.mode = sim_mode_from_string(mode);
            cfg.path_sharing = path_sharing;
            cfg.max_hold_s = max_hold_s;
            const QTableSet none;
            py::gil_scoped_release release;
            return simulate(city, tables ? *tables : none, deliveries, cfg);
        },
        py::arg("city"), py::arg("deliveries"), py::arg("mode") = "deliverai", py::arg("tables") = py::none(),
        py::arg("path_sharing") = true, py::arg("max_hold_s") = SimConfig{}.max_hold_s);

    m.def(
        "metrics",
        [](const SimResult& r, const City& city, const std::vector<Delivery>& deliveries, const std::string& label) {
            return to_dict(compute_metrics(r, {label, "", 0, 0, fingerprint(city), fingerprint(deliveries)}));
        },
        py::arg("result"), py::arg("city"), py::arg("deliveries"), py::arg("label") = "");
}
