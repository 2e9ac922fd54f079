#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "deliverai/matrix.hpp"
#include "deliverai/network.hpp"
#include "deliverai/rng.hpp"

namespace deliverai {

/// Action values of the agent that routes deliveries to `dest`.
/// q(s, a): value of hopping from hotspot s to hotspot a.
struct QTable {
    HotspotIndex dest = 0;
    SquareMatrix q;

    std::size_t size() const { return q.size(); }
    std::span<const double> row(HotspotIndex s) const { return q.row(s); }

    friend bool operator==(const QTable&, const QTable&) = default;
};

struct BoltzmannPolicy {
    double temperature = 10.0;
};

struct EpsilonGreedyPolicy {
    double epsilon = 0.8;
};

using ExplorationPolicy = std::variant<BoltzmannPolicy, EpsilonGreedyPolicy>;

std::string describe(const ExplorationPolicy& policy);

struct TrainingConfig {
    double alpha = 0.8;
    double gamma = 0.99;
    ExplorationPolicy policy = BoltzmannPolicy{};
    std::size_t episodes = 20000;
    /// 0 means 4 * |H|.
    std::size_t max_steps_per_episode = 0;
    std::uint64_t seed = 1;
};

void validate(const TrainingConfig& cfg);

/// Mean absolute TD error of each episode, in episode order.
struct TrainingTrace {
    std::vector<double> mean_abs_td_error;
};

/// -1 for staying put, -t_norm for a hop, -t_norm + 1 for the hop that
/// reaches the agent's destination.
double reward(HotspotIndex dest, HotspotIndex s, HotspotIndex a, const OverlayNetwork& net);

/// Index of the largest entry, lowest index on ties.
HotspotIndex argmax(std::span<const double> values);

/// Softmax of values / temperature, evaluated in max-shifted form.
std::vector<double> boltzmann_probabilities(std::span<const double> qrow, double temperature);

HotspotIndex select_action(std::span<const double> qrow, const ExplorationPolicy& policy, Rng& rng);

struct TrainedAgent {
    QTable table;
    TrainingTrace trace;
};

TrainedAgent train_agent(HotspotIndex dest, const OverlayNetwork& net, const TrainingConfig& cfg);

/// One agent per hotspot. Agent `d` is trained with seed `cfg.seed ^ d`, so
/// the result does not depend on `threads`.
std::vector<TrainedAgent> train_all(const OverlayNetwork& net, const TrainingConfig& cfg, unsigned threads = 1);

/// Row-wise min-max scaling of q(s, .) into [0, 1]; a flat row maps to 0.5.
std::vector<double> normalized_q(const QTable& table, HotspotIndex s);

/// Hops (excluding `start`) obtained by following argmax actions until the
/// destination. Throws CycleError if a hotspot repeats or |H| hops pass.
std::vector<HotspotIndex> greedy_path(const QTable& table, HotspotIndex start);

/// The full set of trained tables, indexed by destination hotspot.
class QTableSet {
public:
    QTableSet() = default;
    explicit QTableSet(std::vector<QTable> tables);

    std::size_t size() const { return tables_.size(); }
    const QTable& for_dest(HotspotIndex dest) const { return tables_.at(dest); }
    const std::vector<QTable>& tables() const { return tables_; }

private:
    std::vector<QTable> tables_;
};

QTableSet to_table_set(const std::vector<TrainedAgent>& agents);

std::string qtable_to_json(const QTable& table);
QTable qtable_from_json(const std::string& text);

/// Writes agent_<dest>.json per table, manifest.json, and training_error.csv.
void save_bundle(const std::filesystem::path& dir, const std::vector<TrainedAgent>& agents,
                 const TrainingConfig& cfg, std::uint64_t city_fingerprint);

struct TableBundle {
    QTableSet tables;
    TrainingConfig config;
    std::uint64_t city_fingerprint = 0;
};

TableBundle load_bundle(const std::filesystem::path& dir);

}  // namespace deliverai
