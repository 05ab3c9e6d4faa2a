#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "aaqs/adversary.hpp"
#include "aaqs/numeric.hpp"

using namespace aaqs;

namespace {

PredictionGameSpec log_spec(int experts, double eta = 1.0) {
    PredictionGameSpec spec;
    spec.profile = make_profile(Generator::from_key("sum"), eta);
    spec.loss = LossFunction::from_key("log");
    spec.num_outcomes = 2;
    spec.num_experts = experts;
    return spec;
}

GlobalGameConfig base_cfg(int experts, int rounds, double c, double a) {
    GlobalGameConfig cfg;
    cfg.spec = log_spec(experts);
    cfg.c = c;
    cfg.a = a;
    cfg.rounds = rounds;
    return cfg;
}

}  // namespace

TEST_CASE("aaqs learner mirrors the engine") {
    PredictionGameSpec spec = log_spec(2);
    AaqsLearner learner(spec, SubstitutionRule::logloss_exact());
    std::vector<DecisionVector> experts{{0.8, 0.2}, {0.4, 0.6}};
    DecisionVector d = learner.decide(experts);
    CHECK(d[0] == doctest::Approx(0.6).epsilon(1e-12));

    learner.observe(experts, 0);
    DecisionVector d2 = learner.decide(experts);
    // posterior (2/3, 1/3): mixture 2/3*0.8 + 1/3*0.4
    CHECK(d2[0] == doctest::Approx(2.0 / 3.0 * 0.8 + 1.0 / 3.0 * 0.4).epsilon(1e-12));
}

TEST_CASE("random environment is seed-deterministic and (c,a)-independent") {
    DecisionGrid moves = DecisionGrid::binary(100);
    GlobalGameConfig cfg = base_cfg(3, 20, 1.0, 1.0);

    AaqsLearner l1(cfg.spec, SubstitutionRule::logloss_exact());
    RandomEnvironment e1(42, moves);
    GlobalGameResult r1 = play_global_game(l1, e1, cfg);

    GlobalGameConfig other = cfg;
    other.c = 0.5;
    other.a = 0.0;
    AaqsLearner l2(other.spec, SubstitutionRule::logloss_exact());
    RandomEnvironment e2(42, moves);
    GlobalGameResult r2 = play_global_game(l2, e2, other);

    REQUIRE(r1.transcript.size() == 20);
    REQUIRE(r2.transcript.size() == 20);
    for (std::size_t t = 0; t < r1.transcript.size(); ++t) {
        CHECK(r1.transcript[t].outcome == r2.transcript[t].outcome);
        CHECK(r1.transcript[t].expert_predictions == r2.transcript[t].expert_predictions);
    }
}

TEST_CASE("learner wins the global game at the aggregation bound") {
    DecisionGrid moves = DecisionGrid::binary(100);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        GlobalGameConfig cfg = base_cfg(3, 60, 1.0, 1.0);
        AaqsLearner learner(cfg.spec, SubstitutionRule::logloss_exact());
        RandomEnvironment env(seed, moves);
        GlobalGameResult res = play_global_game(learner, env, cfg);
        INFO("seed ", seed, " violation at ", res.first_violation_round);
        CHECK(res.learner_wins);
        CHECK(res.first_violation_round == -1);
    }
}

TEST_CASE("folded lambda aggregates agree with the u sums") {
    DecisionGrid moves = DecisionGrid::binary(100);
    GlobalGameConfig cfg = base_cfg(2, 25, 1.0, 1.0);
    cfg.spec.profile = make_profile(Generator::from_key("sqrt"), 1.0);
    AaqsLearner learner(cfg.spec, SubstitutionRule::minimax_grid(moves));
    RandomEnvironment env(7, moves);
    GlobalGameResult res = play_global_game(learner, env, cfg);

    REQUIRE(res.learner_fold.size() == 25);
    const Generator& gen = cfg.spec.profile.gen;
    CHECK(gen.u(res.learner_fold.back()) ==
          doctest::Approx(res.learner_aggregate_u).epsilon(1e-9));
    for (int th = 0; th < 2; ++th)
        CHECK(gen.u(res.expert_fold.back()[static_cast<std::size_t>(th)]) ==
              doctest::Approx(res.expert_aggregate_u[static_cast<std::size_t>(th)]).epsilon(1e-9));
}

TEST_CASE("greedy adversary beats the learner below the corner") {
    // With a < 1 - c * eps the symmetric split (p, 1-p) vs (1-p, p) already
    // wins for nature in round one: the learner must play near (1/2, 1/2) and
    // pays ln 2 while one expert pays -ln(1 - p).
    DecisionGrid moves = DecisionGrid::binary(1000);
    GlobalGameConfig cfg = base_cfg(2, 5, 1.0, 0.5);
    AaqsLearner learner(cfg.spec, SubstitutionRule::logloss_exact());
    GreedyEnvironment env(moves);
    GlobalGameResult res = play_global_game(learner, env, cfg);
    CHECK_FALSE(res.learner_wins);
    CHECK(res.first_violation_round == 0);
    REQUIRE(res.transcript.size() == 5);  // the game is still played out
}

TEST_CASE("greedy adversary cannot beat the learner at the bound") {
    DecisionGrid moves = DecisionGrid::binary(200);
    GlobalGameConfig cfg = base_cfg(2, 30, 1.0, 1.0);
    AaqsLearner learner(cfg.spec, SubstitutionRule::logloss_exact());
    GreedyEnvironment env(moves);
    GlobalGameResult res = play_global_game(learner, env, cfg);
    CHECK(res.learner_wins);
}

TEST_CASE("replay environment reproduces a recorded game") {
    DecisionGrid moves = DecisionGrid::binary(100);
    GlobalGameConfig cfg = base_cfg(3, 15, 1.0, 1.0);
    AaqsLearner l1(cfg.spec, SubstitutionRule::logloss_exact());
    RandomEnvironment e1(9, moves);
    GlobalGameResult rec = play_global_game(l1, e1, cfg);

    AaqsLearner l2(cfg.spec, SubstitutionRule::logloss_exact());
    ReplayEnvironment e2(rec.transcript);
    GlobalGameResult rep = play_global_game(l2, e2, cfg);

    REQUIRE(rep.transcript.size() == rec.transcript.size());
    for (std::size_t t = 0; t < rec.transcript.size(); ++t) {
        CHECK(rep.transcript[t].outcome == rec.transcript[t].outcome);
        CHECK(rep.transcript[t].learner_decision == rec.transcript[t].learner_decision);
    }
    CHECK(rep.learner_aggregate_u == rec.learner_aggregate_u);
}

TEST_CASE("frontier is monotone in c and a") {
    DecisionGrid moves = DecisionGrid::binary(100);
    GlobalGameConfig base = base_cfg(3, 30, 1.0, 0.0);
    std::vector<double> cs{0.9, 1.0, 1.1};
    std::vector<double> as{0.0, 0.5, 1.0};

    FrontierResult fr = frontier_scan(
        [&] {
            return std::make_unique<AaqsLearner>(base.spec, SubstitutionRule::logloss_exact());
        },
        [&] { return std::make_unique<RandomEnvironment>(21, moves); }, base, cs, as);

    REQUIRE(fr.learner_wins.size() == 3);
    REQUIRE(fr.learner_wins[0].size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i + 1 < 3) CHECK(fr.learner_wins[i][j] <= fr.learner_wins[i + 1][j]);
            if (j + 1 < 3) CHECK(fr.learner_wins[i][j] <= fr.learner_wins[i][j + 1]);
        }
    // the aggregation bound cell is guaranteed
    CHECK(fr.learner_wins[2][2] == 1);
    CHECK(fr.learner_wins[1][2] == 1);
}
