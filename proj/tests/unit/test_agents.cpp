#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "deliverai/agents.hpp"
#include "deliverai/error.hpp"
#include "support.hpp"

using namespace deliverai;
using deliverai::testing::fixture_city;
using deliverai::testing::random_clique;

namespace {

City two_node(double seconds) {
    SquareMatrix t(2);
    t(0, 1) = seconds;
    t(1, 0) = seconds;
    return fixture_city({{41.88, -87.63}, {41.89, -87.63}}, t);
}

City three_node() {
    SquareMatrix t(3);
    t(0, 1) = 100;
    t(1, 0) = 120;
    t(0, 2) = 400;
    t(2, 0) = 380;
    t(1, 2) = 150;
    t(2, 1) = 170;
    return fixture_city({{41.88, -87.63}, {41.89, -87.63}, {41.90, -87.63}}, t);
}

}  // namespace

TEST_CASE("reward cases") {
    const City c = three_node();
    const auto& net = c.overlay;
    CHECK(reward(2, 1, 1, net) == -1.0);
    // time_norm(0, 2) is the largest edge
    CHECK(net.time_norm(0, 2) == 1.0);
    CHECK(reward(1, 0, 2, net) == -1.0);
    CHECK(reward(2, 0, 2, net) == doctest::Approx(1.0 - 1.0));
    const double tn = net.time_norm(1, 2);
    CHECK(reward(2, 1, 2, net) == doctest::Approx(1.0 - tn));
    CHECK(reward(0, 1, 2, net) == doctest::Approx(-tn));

    SUBCASE("time_norm 0.3 into the destination gives +0.7") {
        SquareMatrix t(3);
        // off-diagonal values 100..200 so 130 normalizes to 0.3
        t(0, 1) = 130;
        t(1, 0) = 100;
        t(0, 2) = 200;
        t(2, 0) = 200;
        t(1, 2) = 150;
        t(2, 1) = 150;
        const City d = fixture_city({{0, 0}, {0, 0.01}, {0, 0.02}}, t);
        CHECK(d.overlay.time_norm(0, 1) == doctest::Approx(0.3));
        CHECK(reward(1, 0, 1, d.overlay) == doctest::Approx(0.7));
    }
}

TEST_CASE("argmax takes the lowest index on ties") {
    const std::vector<double> v{1.0, 3.0, 3.0, 2.0};
    CHECK(argmax(v) == 1);
}

TEST_CASE("boltzmann probabilities") {
    const std::vector<double> q{1.0, 2.0};
    const auto p = boltzmann_probabilities(q, 1.0);
    CHECK(p[1] == doctest::Approx(std::exp(2.0) / (std::exp(1.0) + std::exp(2.0))).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.731).epsilon(1e-3));

    SUBCASE("higher value, higher probability") { CHECK(p[1] > p[0]); }
    SUBCASE("mass concentrates on the argmax as T shrinks") {
        const std::vector<double> r{0.2, 0.9, 0.5};
        CHECK(boltzmann_probabilities(r, 1e-3)[1] == doctest::Approx(1.0));
    }
    SUBCASE("sums to one") {
        Rng rng(9);
        for (int k = 0; k < 50; ++k) {
            std::vector<double> row(12);
            for (auto& x : row) x = rng.uniform(-50, 50);
            const auto pr = boltzmann_probabilities(row, rng.uniform(0.1, 20));
            CHECK(std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("epsilon-greedy selection") {
    const std::vector<double> q{0.1, 0.7, 0.3, 0.5};
    SUBCASE("epsilon 0 is exactly greedy") {
        Rng rng(1);
        for (int k = 0; k < 1000; ++k) CHECK(select_action(q, EpsilonGreedyPolicy{0.0}, rng) == 1);
    }
    SUBCASE("epsilon 1 is uniform within 3 sigma over 1e5 draws") {
        Rng rng(2);
        constexpr int n = 100000;
        std::vector<int> counts(4, 0);
        for (int k = 0; k < n; ++k) ++counts[select_action(q, EpsilonGreedyPolicy{1.0}, rng)];
        const double mean = n / 4.0, sigma = std::sqrt(n * 0.25 * 0.75);
        for (int c : counts) CHECK(std::abs(c - mean) <= 3 * sigma);
    }
}

TEST_CASE("training") {
    SUBCASE("two hotspots converge to the one-step fixed point") {
        const City c = two_node(300);
        TrainingConfig cfg;
        cfg.episodes = 2000;
        const auto agent = train_agent(1, c.overlay, cfg);
        CHECK(agent.table.q(0, 1) == doctest::Approx(1.0 - c.overlay.time_norm(0, 1)).epsilon(1e-9));
        CHECK(argmax(agent.table.row(0)) == 1);
    }
    SUBCASE("three hotspots match value iteration within 1e-3") {
        const City c = three_node();
        for (auto policy : {ExplorationPolicy{BoltzmannPolicy{}}, ExplorationPolicy{EpsilonGreedyPolicy{}}}) {
            TrainingConfig cfg;
            cfg.policy = policy;
            for (HotspotIndex dest = 0; dest < 3; ++dest) {
                const auto agent = train_agent(dest, c.overlay, cfg);
                const auto vi = deliverai::testing::value_iteration(c.overlay, dest, cfg.gamma);
                for (HotspotIndex s = 0; s < 3; ++s)
                    for (HotspotIndex a = 0; a < 3; ++a)
                        if (s != dest) CHECK(agent.table.q(s, a) == doctest::Approx(vi(s, a)).epsilon(1e-3));
            }
        }
    }
    SUBCASE("deterministic per seed") {
        const City c = random_clique(8, 3);
        TrainingConfig cfg;
        cfg.episodes = 20;  // far from converged, so the seed shows
        CHECK(train_agent(2, c.overlay, cfg).table == train_agent(2, c.overlay, cfg).table);
        auto other = cfg;
        other.seed = 2;
        CHECK_FALSE(train_agent(2, c.overlay, cfg).table == train_agent(2, c.overlay, other).table);
    }
    SUBCASE("train_all does not depend on scheduling") {
        const City c = random_clique(8, 5);
        TrainingConfig cfg;
        cfg.episodes = 500;
        const auto parallel = train_all(c.overlay, cfg, 4);
        REQUIRE(parallel.size() == 8);
        for (HotspotIndex d = 0; d < 8; ++d) {
            auto alone = cfg;
            alone.seed = derive_seed(cfg.seed, d);
            CHECK(parallel[d].table == train_agent(d, c.overlay, alone).table);
        }
    }
    SUBCASE("training error improves") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const City c = random_clique(10, seed);
            TrainingConfig cfg;
            cfg.episodes = 5000;
            const auto& err = train_agent(0, c.overlay, cfg).trace.mean_abs_td_error;
            REQUIRE(err.size() == 5000);
            const double first = std::accumulate(err.begin(), err.begin() + 500, 0.0);
            const double last = std::accumulate(err.end() - 500, err.end(), 0.0);
            CHECK(last < first);
        }
    }
    SUBCASE("invalid config") {
        TrainingConfig cfg;
        cfg.alpha = 0.0;
        CHECK_THROWS_AS(validate(cfg), ValidationError);
        cfg = {};
        cfg.policy = EpsilonGreedyPolicy{1.5};
        CHECK_THROWS_AS(validate(cfg), ValidationError);
    }
}

TEST_CASE("normalized_q") {
    QTable t{2, SquareMatrix(3)};
    t.q(0, 0) = -1;
    t.q(0, 1) = 0;
    t.q(0, 2) = 3;
    const auto n = normalized_q(t, 0);
    CHECK(n == std::vector<double>{0.0, 0.25, 1.0});
    CHECK(argmax(n) == argmax(t.row(0)));
    // flat row
    CHECK(normalized_q(t, 1) == std::vector<double>{0.5, 0.5, 0.5});
}

TEST_CASE("greedy_path") {
    SUBCASE("adjacent-optimal start gives a single hop") {
        QTable t{1, SquareMatrix(3)};
        t.q(0, 1) = 1.0;
        CHECK(greedy_path(t, 0) == std::vector<HotspotIndex>{1});
    }
    SUBCASE("untrained table: one hop when the destination is 0, otherwise a cycle") {
        // ties resolve to index 0; from 0 the walk stays put, which revisits
        QTable to_zero{0, SquareMatrix(4)};
        CHECK(greedy_path(to_zero, 2) == std::vector<HotspotIndex>{0});
        QTable to_three{3, SquareMatrix(4)};
        CHECK_THROWS_AS(greedy_path(to_three, 2), CycleError);
        CHECK_THROWS_AS(greedy_path(to_three, 3), ValidationError);
    }
    SUBCASE("positive affine rescaling keeps the path") {
        const City c = random_clique(10, 8);
        const auto agent = train_agent(4, c.overlay, TrainingConfig{});
        QTable scaled = agent.table;
        for (HotspotIndex s = 0; s < 10; ++s)
            for (auto& x : scaled.q.row(s)) x = 3.5 * x + static_cast<double>(s);
        for (HotspotIndex s = 0; s < 10; ++s)
            if (s != 4) CHECK(greedy_path(scaled, s) == greedy_path(agent.table, s));
    }
    SUBCASE("five-hotspot clique: within 2% of the shortest normalized path") {
        const City c = random_clique(5, 21);
        const auto& w = c.overlay.time_norm_matrix();
        for (const auto& agent : train_all(c.overlay, TrainingConfig{}, 2)) {
            const auto oracle = deliverai::testing::dijkstra_to(w, agent.table.dest);
            for (HotspotIndex s = 0; s < 5; ++s) {
                if (s == agent.table.dest) continue;
                const double cost = deliverai::testing::path_cost(w, s, greedy_path(agent.table, s));
                CHECK(cost <= oracle[s] * 1.02 + 1e-12);
            }
        }
    }
}

TEST_CASE("table bundle round trip") {
    const City c = random_clique(6, 2);
    TrainingConfig cfg;
    cfg.episodes = 300;
    cfg.policy = EpsilonGreedyPolicy{0.5};
    const auto agents = train_all(c.overlay, cfg, 2);
    const auto dir = std::filesystem::temp_directory_path() / "deliverai_unit_tables";
    std::filesystem::remove_all(dir);
    save_bundle(dir, agents, cfg, fingerprint(c));
    const auto back = load_bundle(dir);
    CHECK(back.city_fingerprint == fingerprint(c));
    CHECK(back.config.episodes == 300);
    CHECK(std::get<EpsilonGreedyPolicy>(back.config.policy).epsilon == 0.5);
    REQUIRE(back.tables.size() == 6);
    for (HotspotIndex d = 0; d < 6; ++d) CHECK(back.tables.for_dest(d) == agents[d].table);
    CHECK(std::filesystem::exists(dir / "training_error.csv"));
    std::filesystem::remove_all(dir);
}
