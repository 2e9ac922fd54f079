#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deliverai/simulator.hpp"

namespace deliverai {

/// Where a run came from. Two reports are comparable only when city and
/// delivery list match.
struct Provenance {
    std::string mode;  // deliverai-I, deliverai-II, baseline1, baseline2, ...
    std::string profile;
    unsigned l0 = 0;
    std::uint64_t seed = 0;
    std::uint64_t city_fingerprint = 0;
    std::uint64_t load_fingerprint = 0;
};

struct MetricsReport {
    Provenance provenance;
    std::size_t n_deliveries = 0;
    double dist_tot_km = 0.0;
    double time_avg_s = 0.0;
    std::size_t veh_tot = 0;
    double hops_avg = 0.0;
    std::vector<double> ur_series;  // one value per sampled tick
    std::vector<Tick> ur_ticks;
    double ur_avg = 0.0;
    double succ_ratio = 0.0;
};

/// Throws IncompleteTraceError listing the unfinished delivery ids.
MetricsReport compute_metrics(const SimResult& result, const Provenance& provenance);

/// b is the reference (usually a baseline). Percent decrease for DIST and
/// VEH, percent increase for TIME, percentage points for UR and SUCC.
struct MetricDeltas {
    double dist_pct_decrease = 0.0;
    double veh_pct_decrease = 0.0;
    double time_pct_increase = 0.0;
    double ur_pp = 0.0;
    double succ_pp = 0.0;
};

/// Refuses (ValidationError) when the two runs used different cities or
/// delivery lists.
MetricDeltas compare(const MetricsReport& a, const MetricsReport& b);

double percent_decrease(double value, double reference);

/// metrics.csv: one row per run.
void write_metrics_csv(const std::vector<MetricsReport>& reports, const std::filesystem::path& path);
std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path);

struct ComparisonRow {
    std::string profile;
    unsigned l0 = 0;
    std::string mode;
    std::string reference;
    std::size_t seeds = 0;
    MetricDeltas mean;
    MetricDeltas stdev;
    double ur_avg_mode = 0.0;
    double ur_avg_reference = 0.0;
    double succ_mode = 0.0;
    double succ_reference = 0.0;
};

/// compare.csv: one row per (profile, l0, mode, reference) pairing.
void write_compare_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);

}  // namespace deliverai
