// deliverai command line: city and load generation, training, simulation
// grids and reports.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "deliverai/error.hpp"
#include "deliverai/experiment.hpp"
#include "deliverai/version.hpp"

namespace fs = std::filesystem;
using namespace deliverai;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIncompleteGrid = 3;

fs::path output_root() {
    const char* env = std::getenv("DELIVERAI_OUT");
    return env && *env ? fs::path(env) : fs::path("out");
}

fs::path or_default(const std::string& flag, const char* name) {
    return flag.empty() ? output_root() / name : fs::path(flag);
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

QTableSet load_tables_for(const fs::path& dir, const City& city) {
    auto bundle = load_bundle(dir);
    if (bundle.city_fingerprint != fingerprint(city))
        throw ValidationError("tables in " + dir.string() + " were trained on a different city");
    return std::move(bundle.tables);
}

struct SimFlags {
    Tick tick_s = 1;
    double r_agent_km = 1.0;
    Tick tau_s = 900;
    Tick stable_from_s = 600;
    Tick stable_to_s = 3000;
    Tick max_hold_s = 120;
    std::size_t max_hops = 0;
    bool no_sharing = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tick", tick_s, "Clock tick in seconds")->capture_default_str();
        cmd->add_option("--r-agent", r_agent_km, "Agent interaction range in km")->capture_default_str();
        cmd->add_option("--tau", tau_s, "On-time threshold in seconds")->capture_default_str();
        cmd->add_option("--stable-from", stable_from_s, "Start of the UR averaging window (s)")->capture_default_str();
        cmd->add_option("--stable-to", stable_to_s, "End of the UR averaging window (s)")->capture_default_str();
        cmd->add_option("--max-hold", max_hold_s, "Per-delivery budget for waiting on a partner (s)")
            ->capture_default_str();
        cmd->add_option("--max-hops", max_hops, "Overlay hops before a delivery stops pairing (0 = 2|H|)")
            ->capture_default_str();
        cmd->add_flag("--no-sharing", no_sharing, "DeliverAI routing without path-sharing");
    }

    SimConfig config() const {
        SimConfig c;
        c.tick_s = tick_s;
        c.r_agent_km = r_agent_km;
        c.tau_s = tau_s;
        c.stable_from_s = stable_from_s;
        c.stable_to_s = stable_to_s;
        c.max_hold_s = max_hold_s;
        c.max_overlay_hops = max_hops;
        c.path_sharing = !no_sharing;
        return c;
    }
};

void print_report(const MetricsReport& m) {
    std::printf("%-13s deliveries=%zu DIST=%.3f km TIME=%.2f s VEH=%zu HOPS=%.4f UR=%.4f SUCC=%.4f\n",
                m.provenance.mode.c_str(), m.n_deliveries, m.dist_tot_km, m.time_avg_s, m.veh_tot, m.hops_avg, m.ur_avg,
                m.succ_ratio);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DeliverAI path-sharing delivery simulator"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "TOML/INI file with defaults; flags override it");
    app.require_subcommand(1);

    // gen-city
    auto* gen_city = app.add_subcommand("gen-city", "Generate a synthetic city");
    std::size_t tracts = 30;
    std::uint64_t city_seed = 1;
    double consumers = 992, producers = 356, road_factor = 1.3, cdv_speed = 30, pdv_speed = 30;
    std::string road_model = "haversine";
    std::vector<double> bbox;
    std::string city_out;
    gen_city->add_option("--tracts", tracts, "Number of census tracts (= hotspots)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
        ->capture_default_str();
    gen_city->add_option("--seed", city_seed, "Generator seed")->capture_default_str();
    gen_city->add_option("--consumers", consumers, "Total consumer sites")->capture_default_str();
    gen_city->add_option("--producers", producers, "Total producer sites")->capture_default_str();
    gen_city->add_option("--road-factor", road_factor, "Street distance over model distance")->capture_default_str();
    gen_city->add_option("--road-model", road_model, "haversine or manhattan")
        ->check(CLI::IsMember({"haversine", "manhattan"}))
        ->capture_default_str();
    gen_city->add_option("--cdv-speed", cdv_speed, "Core vehicle speed, km/h")->capture_default_str();
    gen_city->add_option("--pdv-speed", pdv_speed, "Peripheral vehicle speed, km/h")->capture_default_str();
    gen_city->add_option("--bbox", bbox, "lat_min lon_min lat_max lon_max")->expected(4);
    gen_city->add_option("-o,--output", city_out, "City JSON path (default $DELIVERAI_OUT/city.json)");

    // gen-load
    auto* gen_load = app.add_subcommand("gen-load", "Generate a delivery load file");
    std::string load_city_path, load_out, profile_name = "uniform";
    unsigned l0 = 5, duration = 60;
    double sigma = 8.0;
    std::uint64_t load_seed = 1;
    gen_load->add_option("--city", load_city_path, "City JSON")->required()->check(CLI::ExistingFile);
    gen_load->add_option("--profile", profile_name, "uniform or gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}))
        ->capture_default_str();
    gen_load->add_option("--l0", l0, "Deliveries per minute at peak")->check(CLI::PositiveNumber)->capture_default_str();
    gen_load->add_option("--sigma", sigma, "Gaussian spread in minutes")->capture_default_str();
    gen_load->add_option("--duration", duration, "Minutes of generation")->capture_default_str();
    gen_load->add_option("--seed", load_seed, "Load seed")->capture_default_str();
    gen_load->add_option("-o,--output", load_out, "Load CSV path (default $DELIVERAI_OUT/load.csv)");

    // train
    auto* train = app.add_subcommand("train", "Train one Q-learning agent per hotspot");
    std::string train_city_path, train_out, policy = "boltzmann";
    TrainingConfig tcfg;
    double temperature = 10.0, epsilon = 0.8;
    unsigned train_threads = std::max(1u, std::thread::hardware_concurrency());
    train->add_option("--city", train_city_path, "City JSON")->required()->check(CLI::ExistingFile);
    train->add_option("--policy", policy, "boltzmann or epsilon")
        ->check(CLI::IsMember({"boltzmann", "epsilon"}))
        ->capture_default_str();
    train->add_option("--temperature", temperature, "Boltzmann temperature")->capture_default_str();
    train->add_option("--epsilon", epsilon, "Exploration rate for epsilon-greedy")->capture_default_str();
    train->add_option("--alpha", tcfg.alpha, "Learning rate")->capture_default_str();
    train->add_option("--gamma", tcfg.gamma, "Discount factor")->capture_default_str();
    train->add_option("--episodes", tcfg.episodes, "Episodes per agent")->capture_default_str();
    train->add_option("--max-steps", tcfg.max_steps_per_episode, "Steps per episode (0 = 4|H|)")
        ->capture_default_str();
    train->add_option("--seed", tcfg.seed, "Training seed")->capture_default_str();
    train->add_option("--threads", train_threads, "Worker threads")->check(CLI::PositiveNumber);
    train->add_option("-o,--output", train_out, "Bundle directory (default $DELIVERAI_OUT/tables_<policy>)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one load file or a (mode x profile x l0 x seed) grid");
    std::string sim_city_path, sim_load, sim_tables, sim_out, sim_mode = "deliverai";
    std::string tables_boltzmann, tables_epsilon;
    std::uint64_t sim_seed = 0;
    ExperimentSpec spec;
    std::vector<std::string> profile_names{"uniform"};
    std::size_t n_seeds = 0;
    bool no_bundles = false;
    SimFlags sim_flags;
    sim->add_option("--city", sim_city_path, "City JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--load", sim_load, "Single run: load CSV")->check(CLI::ExistingFile);
    sim->add_option("--mode", sim_mode, "Single run: deliverai, baseline1 or baseline2")
        ->check(CLI::IsMember({"deliverai", "baseline1", "baseline2"}))
        ->capture_default_str();
    sim->add_option("--tables", sim_tables, "Single run: Q-table bundle directory");
    sim->add_option("--seed", sim_seed, "Single run: seed recorded in the manifest");
    sim->add_option("--modes", spec.modes, "Grid: run labels")->capture_default_str();
    sim->add_option("--profiles", profile_names, "Grid: load profiles")->capture_default_str();
    sim->add_option("--l0", spec.l0s, "Grid: loads")->capture_default_str();
    sim->add_option("--seeds", spec.seeds, "Grid: explicit seeds")->capture_default_str();
    sim->add_option("--n-seeds", n_seeds, "Grid: use seeds 1..N instead of --seeds");
    sim->add_option("--sigma", spec.sigma_min, "Gaussian spread in minutes")->capture_default_str();
    sim->add_option("--tables-boltzmann", tables_boltzmann, "Grid: bundle for deliverai-I")->check(CLI::ExistingDirectory);
    sim->add_option("--tables-epsilon", tables_epsilon, "Grid: bundle for deliverai-II")->check(CLI::ExistingDirectory);
    sim->add_option("--workers", spec.workers, "Grid: worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_flag("--no-bundles", no_bundles, "Grid: keep only metrics, skip per-cell trace bundles");
    sim->add_option("-o,--output", sim_out, "Output directory (default $DELIVERAI_OUT/run or /grid)");
    sim_flags.attach(sim);

    // report
    auto* report = app.add_subcommand("report", "Aggregate a grid into summary.csv and compare.csv");
    std::string report_dir;
    report->add_option("grid", report_dir, "Grid output directory")->required()->check(CLI::ExistingDirectory);

    // compare
    auto* cmp = app.add_subcommand("compare", "Metric deltas of run A against reference run B");
    std::string cmp_a, cmp_b;
    cmp->add_option("a", cmp_a, "Run bundle directory or metrics.json")->required()->check(CLI::ExistingPath);
    cmp->add_option("b", cmp_b, "Reference bundle directory or metrics.json")->required()->check(CLI::ExistingPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_city) {
            SyntheticCityParams params;
            params.n_tracts = tracts;
            params.consumers_per_tract = consumers / static_cast<double>(tracts);
            params.producers_per_tract = producers / static_cast<double>(tracts);
            params.road_factor = road_factor;
            params.road_model = road_model_from_string(road_model);
            params.cdv_speed_kmh = cdv_speed;
            params.pdv_speed_kmh = pdv_speed;
            if (!bbox.empty()) params.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
            const City city = generate_synthetic_city(params, city_seed);
            const auto path = or_default(city_out, "city.json");
            ensure_parent(path);
            save_city(city, path);
            std::printf("wrote %s: %zu hotspots, %zu consumers, %zu producers, road %s x%.2f, cdv %.1f km/h, pdv %.1f km/h\n",
                        path.string().c_str(), city.overlay.size(), city.sites_of_kind(SiteKind::consumer).size(),
                        city.sites_of_kind(SiteKind::producer).size(), to_string(city.road_model), city.road_factor,
                        cdv_speed, city.pdv_speed_kmh);
        } else if (*gen_load) {
            const City city = load_city(load_city_path);
            const LoadProfile profile{load_kind_from_string(profile_name), l0, sigma, duration};
            const auto deliveries = generate_deliveries(profile, city, load_seed);
            const auto path = or_default(load_out, "load.csv");
            ensure_parent(path);
            save_load_csv(to_orders(deliveries), path);
            std::printf("wrote %s: %zu deliveries (%s, l0=%u, seed=%llu)\n", path.string().c_str(), deliveries.size(),
                        profile_name.c_str(), l0, static_cast<unsigned long long>(load_seed));
        } else if (*train) {
            const City city = load_city(train_city_path);
            if (policy == "boltzmann")
                tcfg.policy = BoltzmannPolicy{temperature};
            else
                tcfg.policy = EpsilonGreedyPolicy{epsilon};
            const auto agents = train_all(city.overlay, tcfg, train_threads);
            const fs::path dir = train_out.empty() ? output_root() / ("tables_" + policy) : fs::path(train_out);
            save_bundle(dir, agents, tcfg, fingerprint(city));
            std::printf("wrote %s: %zu agents, %s, %zu episodes each\n", dir.string().c_str(), agents.size(),
                        describe(tcfg.policy).c_str(), tcfg.episodes);
        } else if (*sim) {
            const City city = load_city(sim_city_path);
            SimConfig cfg = sim_flags.config();
            if (!sim_load.empty()) {
                cfg.mode = sim_mode_from_string(sim_mode);
                cfg.seed = sim_seed;
                const auto deliveries = resolve_orders(load_load_csv(sim_load), city);
                QTableSet tables;
                if (cfg.mode == SimMode::deliverai) {
                    if (sim_tables.empty()) throw ValidationError("--tables is required for mode deliverai");
                    tables = load_tables_for(sim_tables, city);
                }
                const auto result = simulate(city, tables, deliveries, cfg);
                const auto dir = or_default(sim_out, "run");
                save_result_bundle(dir, result, city,
                                   {{"label", sim_mode}, {"load_file", sim_load}, {"tables", sim_tables}});
                const auto m = compute_metrics(result, {sim_mode, "file", 0, sim_seed, fingerprint(city),
                                                        fingerprint(deliveries)});
                save_metrics_json(m, dir / "metrics.json");
                print_report(m);
            } else {
                spec.profiles.clear();
                for (const auto& p : profile_names) spec.profiles.push_back(load_kind_from_string(p));
                if (n_seeds) {
                    spec.seeds.clear();
                    for (std::uint64_t s = 1; s <= n_seeds; ++s) spec.seeds.push_back(s);
                }
                spec.sim = cfg;
                spec.write_bundles = !no_bundles;
                TableCatalog catalog;
                for (const auto& m : spec.modes) {
                    if (m == kModeDeliverAI1) {
                        if (tables_boltzmann.empty()) throw ValidationError("--tables-boltzmann is required for deliverai-I");
                        catalog[m] = load_tables_for(tables_boltzmann, city);
                    } else if (m == kModeDeliverAI2) {
                        if (tables_epsilon.empty()) throw ValidationError("--tables-epsilon is required for deliverai-II");
                        catalog[m] = load_tables_for(tables_epsilon, city);
                    }
                }
                const auto dir = or_default(sim_out, "grid");
                const auto reports = run_grid(city, catalog, spec, dir);
                std::printf("ran %zu cells into %s\n", reports.size(), dir.string().c_str());
            }
        } else if (*report) {
            const auto r = report_grid(report_dir);
            if (!r.missing.empty()) {
                std::fprintf(stderr, "incomplete grid: %zu cells missing\n", r.missing.size());
                for (const auto& c : r.missing) std::fprintf(stderr, "  missing %s\n", c.key().c_str());
                return kExitIncompleteGrid;
            }
            std::printf("%-9s %4s %-13s %-10s %8s %8s %8s %8s %8s\n", "profile", "l0", "mode", "vs", "DIST%dn",
                        "VEH%dn", "TIME%up", "UR", "SUCC");
            for (const auto& c : r.comparisons)
                std::printf("%-9s %4u %-13s %-10s %8.2f %8.2f %8.2f %8.2f %8.2f\n", c.profile.c_str(), c.l0,
                            c.mode.c_str(), c.reference.c_str(), c.mean.dist_pct_decrease, c.mean.veh_pct_decrease,
                            c.mean.time_pct_increase, c.ur_avg_mode * 100.0, c.succ_mode * 100.0);
            std::printf("wrote %s and %s\n", (fs::path(report_dir) / "summary.csv").string().c_str(),
                        (fs::path(report_dir) / "compare.csv").string().c_str());
        } else if (*cmp) {
            auto metrics_path = [](const fs::path& p) { return fs::is_directory(p) ? p / "metrics.json" : p; };
            const auto a = load_metrics_json(metrics_path(cmp_a));
            const auto b = load_metrics_json(metrics_path(cmp_b));
            const auto d = compare(a, b);
            print_report(a);
            print_report(b);
            std::printf("DIST %.2f%% decrease, VEH %.2f%% decrease, TIME %.2f%% increase, UR %+.2f pp, SUCC %+.2f pp\n",
                        d.dist_pct_decrease, d.veh_pct_decrease, d.time_pct_increase, d.ur_pp, d.succ_pp);
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const IncompleteTraceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
