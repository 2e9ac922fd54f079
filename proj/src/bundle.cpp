#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "deliverai/error.hpp"
#include "deliverai/simulator.hpp"
#include "deliverai/version.hpp"

namespace deliverai {

namespace {

std::string exact(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

std::string join_ids(const std::vector<DeliveryId>& payload, const std::vector<DeliveryRecord>& records) {
    std::string s;
    for (std::size_t k = 0; k < payload.size(); ++k) {
        if (k) s += ';';
        s += std::to_string(records.at(payload[k]).id);
    }
    return s;
}

}  // namespace

void save_result_bundle(const std::filesystem::path& dir, const SimResult& result, const City& city,
                        const std::map<std::string, std::string>& provenance) {
    std::filesystem::create_directories(dir);
    const auto& records = result.deliveries;

    {
        auto out = open_out(dir / "deliveries.csv");
        out << "id,producer_id,consumer_id,src,dest,start_s,end_s,wait_s,hops,shared_legs,path\n";
        for (const auto& r : records) {
            out << r.id << ',' << r.producer << ',' << r.consumer << ',' << r.src << ',' << r.dest << ',' << r.start_s
                << ',';
            if (r.end_s) out << *r.end_s;
            out << ',' << r.wait_s << ',' << r.path.size() << ',' << r.shared_legs << ',';
            for (std::size_t k = 0; k < r.path.size(); ++k) out << (k ? ";" : "") << to_string(r.path[k]);
            out << '\n';
        }
    }
    {
        auto out = open_out(dir / "legs.csv");
        out << "leg_id,vehicle_id,kind,origin,dest,depart_s,arrive_s,km,payload_ids,location,dest_location\n";
        for (const auto& leg : result.legs) {
            out << leg.id << ',' << leg.vehicle << ',' << to_string(leg.kind) << ',' << to_string(leg.from) << ','
                << to_string(leg.to) << ',' << leg.depart << ',' << leg.arrive << ',' << exact(leg.km) << ','
                << join_ids(leg.payload, records) << ',' << to_string(leg.origin_location, city) << ','
                << to_string(leg.dest_location, city) << '\n';
        }
    }
    {
        auto out = open_out(dir / "active_counts.csv");
        out << "t,active\n";
        for (const auto& [t, active] : result.active_series) out << t << ',' << active << '\n';
    }
    {
        auto out = open_out(dir / "requests.csv");
        out << "tick,d_i,d_j,h_com,qsum,status\n";
        for (const auto& e : result.requests) {
            out << e.tick << ',' << records.at(e.request.d_i).id << ',' << records.at(e.request.d_j).id << ','
                << e.request.h_com << ',' << exact(e.request.qsum) << ','
                << to_string(e.status) << '\n';
        }
    }

    const auto& cfg = result.config;
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["mode"] = to_string(result.mode);
    manifest["config"] = {{"tick_s", cfg.tick_s},
                          {"r_agent_km", cfg.r_agent_km},
                          {"tau_s", cfg.tau_s},
                          {"seed", cfg.seed},
                          {"stable_from_s", cfg.stable_from_s},
                          {"stable_to_s", cfg.stable_to_s},
                          {"max_hold_s", cfg.max_hold_s},
                          {"max_overlay_hops", cfg.max_overlay_hops},
                          {"path_sharing", cfg.path_sharing}};
    manifest["provenance"] = provenance;
    nlohmann::json peaks = nlohmann::json::object();
    for (const auto& [loc, peak] : result.peaks) peaks[to_string(loc, city)] = peak;
    manifest["peaks"] = peaks;
    const auto& d = result.diagnostics;
    manifest["diagnostics"] = {{"fallback_routes", d.fallback_routes},
                               {"pairs_formed", d.pairs_formed},
                               {"shared_legs", d.shared_legs},
                               {"hop_cap_hits", d.hop_cap_hits},
                               {"last_tick", d.last_tick}};
    auto out = open_out(dir / "run_manifest.json");
    out << manifest.dump(1) << '\n';
}

}  // namespace deliverai
