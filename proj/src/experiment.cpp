#include "deliverai/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "deliverai/error.hpp"
#include "deliverai/version.hpp"

namespace deliverai {

using nlohmann::json;

SimMode sim_mode_for_label(const std::string& label) {
    if (label == kModeDeliverAI1 || label == kModeDeliverAI2) return SimMode::deliverai;
    if (label == kModeBaseline1) return SimMode::baseline1;
    if (label == kModeBaseline2) return SimMode::baseline2;
    throw ValidationError("unknown mode '" + label + "' (expected deliverai-I, deliverai-II, baseline1 or baseline2)");
}

bool is_deliverai_label(const std::string& label) { return sim_mode_for_label(label) == SimMode::deliverai; }

std::string GridCell::key() const {
    return std::string(to_string(profile)) + "/l0_" + std::to_string(l0) + "/seed_" + std::to_string(seed) + "/" +
           mode;
}

std::vector<GridCell> ExperimentSpec::cells() const {
    std::vector<GridCell> out;
    for (auto profile : profiles)
        for (auto l0 : l0s)
            for (auto seed : seeds)
                for (const auto& mode : modes) out.push_back({mode, profile, l0, seed});
    return out;
}

void validate(const ExperimentSpec& spec) {
    if (spec.modes.empty() || spec.profiles.empty() || spec.l0s.empty() || spec.seeds.empty())
        throw ValidationError("experiment grid is empty");
    for (const auto& m : spec.modes) sim_mode_for_label(m);
    for (auto l0 : spec.l0s)
        if (l0 == 0) throw ValidationError("l0 must be positive");
    if (std::set(spec.seeds.begin(), spec.seeds.end()).size() != spec.seeds.size())
        throw ValidationError("duplicate seeds in grid");
    if (spec.workers == 0) throw ValidationError("workers must be at least 1");
    validate(spec.sim);
}

namespace {

std::string hex(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

json spec_json(const ExperimentSpec& spec, std::uint64_t city_fp) {
    json j;
    j["version"] = kVersion;
    j["city_fingerprint"] = hex(city_fp);
    j["modes"] = spec.modes;
    std::vector<std::string> profiles;
    for (auto p : spec.profiles) profiles.emplace_back(to_string(p));
    j["profiles"] = profiles;
    j["l0"] = spec.l0s;
    j["seeds"] = spec.seeds;
    j["sigma_min"] = spec.sigma_min;
    j["duration_min"] = spec.duration_min;
    j["sim"] = {{"tick_s", spec.sim.tick_s},       {"r_agent_km", spec.sim.r_agent_km},
                {"tau_s", spec.sim.tau_s},         {"stable_from_s", spec.sim.stable_from_s},
                {"stable_to_s", spec.sim.stable_to_s}, {"max_hold_s", spec.sim.max_hold_s},
                {"max_overlay_hops", spec.sim.max_overlay_hops}, {"path_sharing", spec.sim.path_sharing}};
    return j;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stdev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

MetricsReport run_cell(const City& city, const TableCatalog& tables, const ExperimentSpec& spec, const GridCell& cell,
                       const std::optional<std::filesystem::path>& bundle_dir) {
    const LoadProfile profile{cell.profile, cell.l0, spec.sigma_min, spec.duration_min};
    const auto deliveries = generate_deliveries(profile, city, cell.seed);
    SimConfig cfg = spec.sim;
    cfg.mode = sim_mode_for_label(cell.mode);
    cfg.seed = cell.seed;

    static const QTableSet kNoTables;
    const QTableSet* set = &kNoTables;
    if (cfg.mode == SimMode::deliverai) {
        const auto it = tables.find(cell.mode);
        if (it == tables.end()) throw ValidationError("no Q-tables supplied for " + cell.mode);
        set = &it->second;
    }
    const auto result = simulate(city, *set, deliveries, cfg);
    const Provenance prov{cell.mode, to_string(cell.profile), cell.l0, cell.seed, fingerprint(city),
                          fingerprint(deliveries)};
    auto report = compute_metrics(result, prov);
    if (bundle_dir) {
        save_result_bundle(*bundle_dir, result, city,
                           {{"label", cell.mode},
                            {"profile", to_string(cell.profile)},
                            {"l0", std::to_string(cell.l0)},
                            {"seed", std::to_string(cell.seed)},
                            {"city_fingerprint", hex(prov.city_fingerprint)},
                            {"load_fingerprint", hex(prov.load_fingerprint)}});
        save_metrics_json(report, *bundle_dir / "metrics.json");
    }
    return report;
}

std::vector<MetricsReport> run_grid(const City& city, const TableCatalog& tables, const ExperimentSpec& spec,
                                    const std::filesystem::path& out_dir) {
    validate(spec);
    for (const auto& m : spec.modes)
        if (is_deliverai_label(m) && !tables.contains(m)) throw ValidationError("no Q-tables supplied for " + m);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "grid_manifest.json", std::ios::binary);
        if (!out) throw ValidationError("cannot write " + (out_dir / "grid_manifest.json").string());
        out << spec_json(spec, fingerprint(city)).dump(1) << '\n';
    }

    const auto cells = spec.cells();
    std::vector<MetricsReport> reports(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                std::optional<std::filesystem::path> dir;
                if (spec.write_bundles) dir = out_dir / cells[i].key();
                reports[i] = run_cell(city, tables, spec, cells[i], dir);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells.size();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const unsigned n = std::min<unsigned>(spec.workers, static_cast<unsigned>(cells.size()));
        for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);
    write_metrics_csv(reports, out_dir / "metrics.csv");
    return reports;
}

ComparisonRow aggregate_comparison(const std::vector<MetricsReport>& mode_runs,
                                   const std::vector<MetricsReport>& reference_runs) {
    ComparisonRow row;
    if (mode_runs.empty() || reference_runs.empty()) return row;
    row.profile = mode_runs.front().provenance.profile;
    row.l0 = mode_runs.front().provenance.l0;
    row.mode = mode_runs.front().provenance.mode;
    row.reference = reference_runs.front().provenance.mode;
    std::vector<double> dist, veh, time, ur, succ, ur_a, ur_b, succ_a, succ_b;
    for (const auto& a : mode_runs) {
        const auto it = std::find_if(reference_runs.begin(), reference_runs.end(), [&](const MetricsReport& b) {
            return b.provenance.seed == a.provenance.seed;
        });
        if (it == reference_runs.end()) continue;
        const auto d = compare(a, *it);
        dist.push_back(d.dist_pct_decrease);
        veh.push_back(d.veh_pct_decrease);
        time.push_back(d.time_pct_increase);
        ur.push_back(d.ur_pp);
        succ.push_back(d.succ_pp);
        ur_a.push_back(a.ur_avg);
        ur_b.push_back(it->ur_avg);
        succ_a.push_back(a.succ_ratio);
        succ_b.push_back(it->succ_ratio);
    }
    row.seeds = dist.size();
    row.mean = {mean_of(dist), mean_of(veh), mean_of(time), mean_of(ur), mean_of(succ)};
    row.stdev = {stdev_of(dist), stdev_of(veh), stdev_of(time), stdev_of(ur), stdev_of(succ)};
    row.ur_avg_mode = mean_of(ur_a);
    row.ur_avg_reference = mean_of(ur_b);
    row.succ_mode = mean_of(succ_a);
    row.succ_reference = mean_of(succ_b);
    return row;
}

GridReport report_grid(const std::filesystem::path& out_dir) {
    std::ifstream in(out_dir / "grid_manifest.json", std::ios::binary);
    if (!in) throw ValidationError("no grid_manifest.json in " + out_dir.string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("grid_manifest.json: ") + e.what());
    }
    ExperimentSpec spec;
    try {
        spec.modes = manifest.at("modes").get<std::vector<std::string>>();
        spec.profiles.clear();
        for (const auto& p : manifest.at("profiles")) spec.profiles.push_back(load_kind_from_string(p.get<std::string>()));
        spec.l0s = manifest.at("l0").get<std::vector<unsigned>>();
        spec.seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("grid_manifest.json: ") + e.what());
    }

    std::vector<MetricsReport> reports;
    if (std::filesystem::exists(out_dir / "metrics.csv")) reports = read_metrics_csv(out_dir / "metrics.csv");
    std::map<GridCell, MetricsReport> found;
    for (auto& r : reports) {
        GridCell c{r.provenance.mode, load_kind_from_string(r.provenance.profile), r.provenance.l0, r.provenance.seed};
        found.emplace(c, std::move(r));
    }

    GridReport out;
    for (const auto& c : spec.cells())
        if (!found.contains(c)) out.missing.push_back(c);
    if (!out.missing.empty()) return out;

    std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
    summary << "profile,l0,mode,seeds,dist_tot_km,dist_sd,time_avg_s,time_sd,veh_tot,veh_sd,hops_avg,hops_sd,ur_avg,"
               "ur_sd,succ_ratio,succ_sd\n";
    auto runs_of = [&](LoadKind p, unsigned l0, const std::string& mode) {
        std::vector<MetricsReport> v;
        for (auto seed : spec.seeds) v.push_back(found.at({mode, p, l0, seed}));
        return v;
    };
    for (auto p : spec.profiles)
        for (auto l0 : spec.l0s) {
            for (const auto& mode : spec.modes) {
                const auto runs = runs_of(p, l0, mode);
                std::vector<double> dist, time, veh, hops, ur, succ;
                for (const auto& r : runs) {
                    dist.push_back(r.dist_tot_km);
                    time.push_back(r.time_avg_s);
                    veh.push_back(static_cast<double>(r.veh_tot));
                    hops.push_back(r.hops_avg);
                    ur.push_back(r.ur_avg);
                    succ.push_back(r.succ_ratio);
                }
                summary << to_string(p) << ',' << l0 << ',' << mode << ',' << runs.size();
                for (const auto* xs : {&dist, &time, &veh, &hops, &ur, &succ}) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, ",%.17g,%.17g", mean_of(*xs), stdev_of(*xs));
                    summary << buf;
                }
                summary << '\n';
            }
            for (const auto& mode : spec.modes) {
                if (!is_deliverai_label(mode)) continue;
                for (const auto& ref : spec.modes) {
                    if (is_deliverai_label(ref)) continue;
                    out.comparisons.push_back(aggregate_comparison(runs_of(p, l0, mode), runs_of(p, l0, ref)));
                }
            }
        }
    write_compare_csv(out.comparisons, out_dir / "compare.csv");
    return out;
}

void save_metrics_json(const MetricsReport& r, const std::filesystem::path& path) {
    const auto& p = r.provenance;
    json j = {{"mode", p.mode},
              {"profile", p.profile},
              {"l0", p.l0},
              {"seed", p.seed},
              {"city_fingerprint", hex(p.city_fingerprint)},
              {"load_fingerprint", hex(p.load_fingerprint)},
              {"n_deliveries", r.n_deliveries},
              {"dist_tot_km", r.dist_tot_km},
              {"time_avg_s", r.time_avg_s},
              {"veh_tot", r.veh_tot},
              {"hops_avg", r.hops_avg},
              {"ur_avg", r.ur_avg},
              {"succ_ratio", r.succ_ratio}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << j.dump(1) << '\n';
}

MetricsReport load_metrics_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    MetricsReport r;
    try {
        json j;
        in >> j;
        auto& p = r.provenance;
        p.mode = j.at("mode").get<std::string>();
        p.profile = j.at("profile").get<std::string>();
        p.l0 = j.at("l0").get<unsigned>();
        p.seed = j.at("seed").get<std::uint64_t>();
        p.city_fingerprint = std::stoull(j.at("city_fingerprint").get<std::string>(), nullptr, 16);
        p.load_fingerprint = std::stoull(j.at("load_fingerprint").get<std::string>(), nullptr, 16);
        r.n_deliveries = j.at("n_deliveries").get<std::size_t>();
        r.dist_tot_km = j.at("dist_tot_km").get<double>();
        r.time_avg_s = j.at("time_avg_s").get<double>();
        r.veh_tot = j.at("veh_tot").get<std::size_t>();
        r.hops_avg = j.at("hops_avg").get<double>();
        r.ur_avg = j.at("ur_avg").get<double>();
        r.succ_ratio = j.at("succ_ratio").get<double>();
    } catch (const std::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return r;
}

}  // namespace deliverai
