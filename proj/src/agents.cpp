#include "deliverai/agents.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "deliverai/error.hpp"

namespace deliverai {

using nlohmann::json;

std::string describe(const ExplorationPolicy& policy) {
    if (const auto* b = std::get_if<BoltzmannPolicy>(&policy)) return "boltzmann(T=" + std::to_string(b->temperature) + ")";
    return "epsilon(eps=" + std::to_string(std::get<EpsilonGreedyPolicy>(policy).epsilon) + ")";
}

void validate(const TrainingConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
    if (cfg.episodes == 0) throw ValidationError("episodes must be positive");
    if (const auto* b = std::get_if<BoltzmannPolicy>(&cfg.policy)) {
        if (!(b->temperature > 0.0) || !std::isfinite(b->temperature))
            throw ValidationError("temperature must be positive");
    } else {
        const double eps = std::get<EpsilonGreedyPolicy>(cfg.policy).epsilon;
        if (!(eps >= 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in [0, 1]");
    }
}

double reward(HotspotIndex dest, HotspotIndex s, HotspotIndex a, const OverlayNetwork& net) {
    if (a == s) return -1.0;
    const double cost = net.time_norm(s, a);
    return a == dest ? 1.0 - cost : -cost;
}

HotspotIndex argmax(std::span<const double> values) {
    HotspotIndex best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

std::vector<double> boltzmann_probabilities(std::span<const double> qrow, double temperature) {
    std::vector<double> p(qrow.size());
    const double top = *std::max_element(qrow.begin(), qrow.end());
    double total = 0.0;
    for (std::size_t i = 0; i < qrow.size(); ++i) {
        p[i] = std::exp((qrow[i] - top) / temperature);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

namespace {

HotspotIndex sample_boltzmann(std::span<const double> qrow, double temperature, Rng& rng,
                              std::vector<double>& scratch) {
    scratch.resize(qrow.size());
    const double top = *std::max_element(qrow.begin(), qrow.end());
    double total = 0.0;
    for (std::size_t i = 0; i < qrow.size(); ++i) {
        scratch[i] = std::exp((qrow[i] - top) / temperature);
        total += scratch[i];
    }
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        u -= scratch[i];
        if (u < 0.0) return i;
    }
    // u can survive the loop only through rounding; fall back to the last
    // action with non-zero weight
    for (std::size_t i = scratch.size(); i-- > 0;)
        if (scratch[i] > 0.0) return i;
    return scratch.size() - 1;
}

HotspotIndex select_with(std::span<const double> qrow, const ExplorationPolicy& policy, Rng& rng,
                         std::vector<double>& scratch) {
    if (const auto* b = std::get_if<BoltzmannPolicy>(&policy)) return sample_boltzmann(qrow, b->temperature, rng, scratch);
    const double eps = std::get<EpsilonGreedyPolicy>(policy).epsilon;
    if (rng.uniform() < eps) return static_cast<HotspotIndex>(rng.below(qrow.size()));
    return argmax(qrow);
}

}  // namespace

HotspotIndex select_action(std::span<const double> qrow, const ExplorationPolicy& policy, Rng& rng) {
    std::vector<double> scratch;
    return select_with(qrow, policy, rng, scratch);
}

TrainedAgent train_agent(HotspotIndex dest, const OverlayNetwork& net, const TrainingConfig& cfg) {
    validate(cfg);
    const std::size_t n = net.size();
    if (n < 2) throw ValidationError("training needs at least two hotspots");
    if (dest >= n) throw ValidationError("destination hotspot out of range");
    const std::size_t max_steps = cfg.max_steps_per_episode ? cfg.max_steps_per_episode : 4 * n;

    // Rewards depend only on (s, a) for a fixed agent.
    SquareMatrix rewards(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < n; ++a) rewards(s, a) = reward(dest, s, a, net);

    TrainedAgent out;
    out.table.dest = dest;
    out.table.q = SquareMatrix(n, 0.0);
    out.trace.mean_abs_td_error.reserve(cfg.episodes);
    auto& q = out.table.q;

    Rng rng(cfg.seed);
    std::vector<double> scratch;
    for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
        // uniform over s != dest
        auto s = static_cast<HotspotIndex>(rng.below(n - 1));
        if (s >= dest) ++s;
        double abs_td = 0.0;
        std::size_t steps = 0;
        while (steps < max_steps) {
            const HotspotIndex a = select_with(q.row(s), cfg.policy, rng, scratch);
            const HotspotIndex next = a;
            const auto next_row = q.row(next);
            const double best_next = *std::max_element(next_row.begin(), next_row.end());
            const double td = rewards(s, a) + cfg.gamma * best_next - q(s, a);
            q(s, a) += cfg.alpha * td;
            abs_td += std::abs(td);
            ++steps;
            s = next;
            if (s == dest) break;
        }
        out.trace.mean_abs_td_error.push_back(abs_td / static_cast<double>(steps));
    }
    return out;
}

std::vector<TrainedAgent> train_all(const OverlayNetwork& net, const TrainingConfig& cfg, unsigned threads) {
    validate(cfg);
    const std::size_t n = net.size();
    std::vector<TrainedAgent> agents(n);
    auto train_one = [&](std::size_t dest) {
        TrainingConfig local = cfg;
        local.seed = derive_seed(cfg.seed, dest);
        agents[dest] = train_agent(dest, net, local);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t d = 0; d < n; ++d) train_one(d);
        return agents;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t d = cursor++; d < n; d = cursor++) train_one(d);
        });
    pool.clear();
    return agents;
}

std::vector<double> normalized_q(const QTable& table, HotspotIndex s) {
    const auto row = table.row(s);
    const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(row.size(), 0.5);
    if (hi > lo)
        for (std::size_t a = 0; a < row.size(); ++a) out[a] = (row[a] - lo) / (hi - lo);
    return out;
}

std::vector<HotspotIndex> greedy_path(const QTable& table, HotspotIndex start) {
    const std::size_t n = table.size();
    if (start >= n) throw ValidationError("start hotspot out of range");
    if (start == table.dest) throw ValidationError("greedy_path needs start != dest");
    std::vector<bool> seen(n, false);
    seen[start] = true;
    std::vector<HotspotIndex> path;
    HotspotIndex s = start;
    for (std::size_t step = 0; step < n; ++step) {
        const HotspotIndex a = argmax(table.row(s));
        path.push_back(a);
        if (a == table.dest) return path;
        if (seen[a])
            throw CycleError("greedy walk to " + std::to_string(table.dest) + " from " + std::to_string(start) +
                             " revisits hotspot " + std::to_string(a));
        seen[a] = true;
        s = a;
    }
    throw CycleError("greedy walk to " + std::to_string(table.dest) + " from " + std::to_string(start) +
                     " did not arrive within |H| hops");
}

QTableSet::QTableSet(std::vector<QTable> tables) : tables_(std::move(tables)) {
    for (std::size_t d = 0; d < tables_.size(); ++d) {
        if (tables_[d].dest != d) throw ValidationError("Q-table at position " + std::to_string(d) + " is for destination " + std::to_string(tables_[d].dest));
        if (tables_[d].size() != tables_.size()) throw ValidationError("Q-table " + std::to_string(d) + " has wrong dimension");
        for (double v : tables_[d].q.values())
            if (!std::isfinite(v)) throw ValidationError("Q-table " + std::to_string(d) + " holds a non-finite value");
    }
}

QTableSet to_table_set(const std::vector<TrainedAgent>& agents) {
    std::vector<QTable> tables;
    tables.reserve(agents.size());
    for (const auto& a : agents) tables.push_back(a.table);
    return QTableSet(std::move(tables));
}

std::string qtable_to_json(const QTable& table) {
    json rows = json::array();
    for (std::size_t s = 0; s < table.size(); ++s) {
        json row = json::array();
        for (double v : table.row(s)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    json doc{{"dest", table.dest}, {"q", std::move(rows)}};
    return doc.dump() + "\n";
}

QTable qtable_from_json(const std::string& content) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("Q-table file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dest") || !doc.contains("q") || !doc["q"].is_array())
        throw ValidationError("Q-table file needs 'dest' and 'q'");
    QTable t;
    t.dest = doc["dest"].get<std::size_t>();
    const auto& rows = doc["q"];
    const std::size_t n = rows.size();
    t.q = SquareMatrix(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (!rows[s].is_array() || rows[s].size() != n) throw ValidationError("Q-table rows must be square");
        for (std::size_t a = 0; a < n; ++a) t.q(s, a) = rows[s][a].get<double>();
    }
    if (t.dest >= n) throw ValidationError("Q-table destination out of range");
    return t;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + p.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json config_json(const TrainingConfig& cfg) {
    json j{{"alpha", cfg.alpha}, {"gamma", cfg.gamma}, {"episodes", cfg.episodes},
           {"max_steps_per_episode", cfg.max_steps_per_episode}, {"seed", cfg.seed}};
    if (const auto* b = std::get_if<BoltzmannPolicy>(&cfg.policy)) {
        j["policy"] = "boltzmann";
        j["temperature"] = b->temperature;
    } else {
        j["policy"] = "epsilon";
        j["epsilon"] = std::get<EpsilonGreedyPolicy>(cfg.policy).epsilon;
    }
    return j;
}

TrainingConfig config_from_json(const json& j) {
    TrainingConfig cfg;
    cfg.alpha = j.at("alpha").get<double>();
    cfg.gamma = j.at("gamma").get<double>();
    cfg.episodes = j.at("episodes").get<std::size_t>();
    cfg.max_steps_per_episode = j.at("max_steps_per_episode").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.at("policy").get<std::string>() == "boltzmann")
        cfg.policy = BoltzmannPolicy{j.at("temperature").get<double>()};
    else
        cfg.policy = EpsilonGreedyPolicy{j.at("epsilon").get<double>()};
    return cfg;
}

}  // namespace

void save_bundle(const std::filesystem::path& dir, const std::vector<TrainedAgent>& agents,
                 const TrainingConfig& cfg, std::uint64_t city_fingerprint) {
    std::filesystem::create_directories(dir);
    json manifest{{"config", config_json(cfg)}, {"hotspots", agents.size()},
                  {"city_fingerprint", city_fingerprint}, {"agents", json::array()}};
    std::ofstream errors(dir / "training_error.csv", std::ios::binary);
    errors << "dest,episode,mean_abs_td_error\n";
    char buf[64];
    for (const auto& agent : agents) {
        const std::string file = "agent_" + std::to_string(agent.table.dest) + ".json";
        std::ofstream(dir / file, std::ios::binary) << qtable_to_json(agent.table);
        manifest["agents"].push_back({{"dest", agent.table.dest}, {"file", file},
                                      {"seed", derive_seed(cfg.seed, agent.table.dest)}});
        const auto& err = agent.trace.mean_abs_td_error;
        for (std::size_t e = 0; e < err.size(); ++e) {
            std::snprintf(buf, sizeof buf, "%.17g", err[e]);
            errors << agent.table.dest << ',' << e << ',' << buf << '\n';
        }
    }
    std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(1) << '\n';
}

TableBundle load_bundle(const std::filesystem::path& dir) {
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw ValidationError("bad Q-table manifest in " + dir.string() + ": " + e.what());
    }
    TableBundle out;
    std::vector<QTable> tables;
    try {
        out.config = config_from_json(manifest.at("config"));
        out.city_fingerprint = manifest.at("city_fingerprint").get<std::uint64_t>();
        for (const auto& a : manifest.at("agents"))
            tables.push_back(qtable_from_json(read_file(dir / a.at("file").get<std::string>())));
    } catch (const json::exception& e) {
        throw ValidationError("bad Q-table manifest in " + dir.string() + ": " + e.what());
    }
    out.tables = QTableSet(std::move(tables));
    return out;
}

}  // namespace deliverai
