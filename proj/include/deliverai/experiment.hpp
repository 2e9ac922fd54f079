#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deliverai/metrics.hpp"

namespace deliverai {

/// Run labels used in grids and reports. The two DeliverAI variants differ
/// only in the exploration policy their tables were trained with.
inline constexpr const char* kModeDeliverAI1 = "deliverai-I";   // Boltzmann
inline constexpr const char* kModeDeliverAI2 = "deliverai-II";  // epsilon-greedy
inline constexpr const char* kModeBaseline1 = "baseline1";
inline constexpr const char* kModeBaseline2 = "baseline2";

SimMode sim_mode_for_label(const std::string& label);
bool is_deliverai_label(const std::string& label);

struct GridCell {
    std::string mode;
    LoadKind profile = LoadKind::uniform;
    unsigned l0 = 0;
    std::uint64_t seed = 0;

    std::string key() const;  // "<profile>/l0_<l0>/seed_<seed>/<mode>"
    auto operator<=>(const GridCell&) const = default;
};

struct ExperimentSpec {
    std::vector<std::string> modes{kModeDeliverAI1, kModeDeliverAI2, kModeBaseline1, kModeBaseline2};
    std::vector<LoadKind> profiles{LoadKind::uniform};
    std::vector<unsigned> l0s{5, 10, 20, 25, 30};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double sigma_min = 8.0;
    unsigned duration_min = 60;
    SimConfig sim;  // mode and seed are set per cell
    unsigned workers = 1;
    bool write_bundles = true;

    std::vector<GridCell> cells() const;
};

void validate(const ExperimentSpec& spec);

/// Tables per DeliverAI label; baselines need none.
using TableCatalog = std::map<std::string, QTableSet>;

/// One cell: generate the load, simulate, compute metrics. When
/// `bundle_dir` is set the full result bundle and metrics.json go there.
MetricsReport run_cell(const City& city, const TableCatalog& tables, const ExperimentSpec& spec, const GridCell& cell,
                       const std::optional<std::filesystem::path>& bundle_dir);

/// Runs every cell on `spec.workers` threads. Writes grid_manifest.json and
/// metrics.csv under `out_dir` (plus per-cell bundles when enabled).
/// Reports come back in cells() order.
std::vector<MetricsReport> run_grid(const City& city, const TableCatalog& tables, const ExperimentSpec& spec,
                                    const std::filesystem::path& out_dir);

struct GridReport {
    std::vector<GridCell> missing;
    std::vector<ComparisonRow> comparisons;
};

/// Reads grid_manifest.json and metrics.csv from `out_dir`, lists missing
/// cells and, when complete, writes compare.csv and summary.csv.
GridReport report_grid(const std::filesystem::path& out_dir);

/// Mean/stdev aggregation of per-seed deltas for one (profile, l0,
/// mode, reference) pairing. Seeds present in only one of the two runs
/// are skipped.
ComparisonRow aggregate_comparison(const std::vector<MetricsReport>& mode_runs,
                                   const std::vector<MetricsReport>& reference_runs);

void save_metrics_json(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport load_metrics_json(const std::filesystem::path& path);

}  // namespace deliverai
