#include "deliverai/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deliverai/error.hpp"

namespace deliverai {

namespace {

std::string exact(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
    return buf;
}

}  // namespace

MetricsReport compute_metrics(const SimResult& result, const Provenance& provenance) {
    std::string missing;
    std::size_t n_missing = 0;
    for (const auto& r : result.deliveries) {
        if (r.end_s) continue;
        if (n_missing++ < 20) missing += (missing.empty() ? "" : ",") + std::to_string(r.id);
    }
    if (n_missing)
        throw IncompleteTraceError(std::to_string(n_missing) + " deliveries unfinished: " + missing +
                                   (n_missing > 20 ? ",..." : ""));

    MetricsReport m;
    m.provenance = provenance;
    m.n_deliveries = result.deliveries.size();
    for (const auto& leg : result.legs) m.dist_tot_km += leg.km;
    for (const auto& [loc, peak] : result.peaks) m.veh_tot += peak;

    double total_time = 0.0;
    double total_hops = 0.0;
    std::size_t on_time = 0;
    for (const auto& r : result.deliveries) {
        const Tick span = *r.end_s - r.start_s;
        total_time += static_cast<double>(span);
        total_hops += static_cast<double>(r.path.size());
        if (span <= result.config.tau_s) ++on_time;
    }
    if (m.n_deliveries) {
        const auto n = static_cast<double>(m.n_deliveries);
        m.time_avg_s = total_time / n;
        m.hops_avg = total_hops / n;
        m.succ_ratio = static_cast<double>(on_time) / n;
    }

    double stable_sum = 0.0;
    std::size_t stable_n = 0;
    for (const auto& [t, active] : result.active_series) {
        const double ur = m.veh_tot ? static_cast<double>(active) / static_cast<double>(m.veh_tot) : 0.0;
        m.ur_ticks.push_back(t);
        m.ur_series.push_back(ur);
        if (t >= result.config.stable_from_s && t <= result.config.stable_to_s) {
            stable_sum += ur;
            ++stable_n;
        }
    }
    m.ur_avg = stable_n ? stable_sum / static_cast<double>(stable_n) : 0.0;
    return m;
}

double percent_decrease(double value, double reference) {
    if (reference == 0.0) return 0.0;
    return (reference - value) / reference * 100.0;
}

MetricDeltas compare(const MetricsReport& a, const MetricsReport& b) {
    const auto& pa = a.provenance;
    const auto& pb = b.provenance;
    if (pa.city_fingerprint != pb.city_fingerprint)
        throw ValidationError("refusing to compare runs on different cities (" + hex(pa.city_fingerprint) + " vs " +
                              hex(pb.city_fingerprint) + ")");
    if (pa.load_fingerprint != pb.load_fingerprint)
        throw ValidationError("refusing to compare runs on different delivery lists (" + hex(pa.load_fingerprint) +
                              " vs " + hex(pb.load_fingerprint) + ")");
    MetricDeltas d;
    d.dist_pct_decrease = percent_decrease(a.dist_tot_km, b.dist_tot_km);
    d.veh_pct_decrease = percent_decrease(static_cast<double>(a.veh_tot), static_cast<double>(b.veh_tot));
    d.time_pct_increase = -percent_decrease(a.time_avg_s, b.time_avg_s);
    d.ur_pp = (a.ur_avg - b.ur_avg) * 100.0;
    d.succ_pp = (a.succ_ratio - b.succ_ratio) * 100.0;
    return d;
}

static constexpr const char* kMetricsHeader =
    "mode,profile,l0,seed,city_fingerprint,load_fingerprint,n_deliveries,dist_tot_km,time_avg_s,veh_tot,hops_avg,"
    "ur_avg,succ_ratio";

void write_metrics_csv(const std::vector<MetricsReport>& reports, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << kMetricsHeader << '\n';
    for (const auto& m : reports) {
        const auto& p = m.provenance;
        out << p.mode << ',' << p.profile << ',' << p.l0 << ',' << p.seed << ',' << hex(p.city_fingerprint) << ','
            << hex(p.load_fingerprint) << ',' << m.n_deliveries << ',' << exact(m.dist_tot_km) << ','
            << exact(m.time_avg_s) << ',' << m.veh_tot << ',' << exact(m.hops_avg) << ',' << exact(m.ur_avg) << ','
            << exact(m.succ_ratio) << '\n';
    }
}

std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader)
        throw ValidationError(path.string() + ": unexpected metrics header");
    std::vector<MetricsReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> c;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) c.push_back(cell);
        if (c.size() != 13) throw ValidationError(path.string() + ": malformed row '" + line + "'");
        MetricsReport m;
        try {
            m.provenance = {c[0], c[1], static_cast<unsigned>(std::stoul(c[2])), std::stoull(c[3]),
                            std::stoull(c[4], nullptr, 16), std::stoull(c[5], nullptr, 16)};
            m.n_deliveries = std::stoull(c[6]);
            m.dist_tot_km = std::stod(c[7]);
            m.time_avg_s = std::stod(c[8]);
            m.veh_tot = std::stoull(c[9]);
            m.hops_avg = std::stod(c[10]);
            m.ur_avg = std::stod(c[11]);
            m.succ_ratio = std::stod(c[12]);
        } catch (const std::logic_error&) {
            throw ValidationError(path.string() + ": malformed number in '" + line + "'");
        }
        out.push_back(std::move(m));
    }
    return out;
}

void write_compare_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "profile,l0,mode,reference,seeds,"
           "A_dist_pct_decrease,A_sd,B_veh_pct_decrease,B_sd,C_time_pct_increase,C_sd,"
           "D_ur_avg_pct,D_ur_avg_reference_pct,D_ur_pp,E_succ_pct,E_succ_reference_pct,E_succ_pp\n";
    for (const auto& r : rows) {
        out << r.profile << ',' << r.l0 << ',' << r.mode << ',' << r.reference << ',' << r.seeds << ','
            << exact(r.mean.dist_pct_decrease) << ',' << exact(r.stdev.dist_pct_decrease) << ','
            << exact(r.mean.veh_pct_decrease) << ',' << exact(r.stdev.veh_pct_decrease) << ','
            << exact(r.mean.time_pct_increase) << ',' << exact(r.stdev.time_pct_increase) << ','
            << exact(r.ur_avg_mode * 100.0) << ',' << exact(r.ur_avg_reference * 100.0) << ','
            << exact(r.mean.ur_pp) << ',' << exact(r.succ_mode * 100.0) << ',' << exact(r.succ_reference * 100.0)
            << ',' << exact(r.mean.succ_pp) << '\n';
    }
}

}  // namespace deliverai
