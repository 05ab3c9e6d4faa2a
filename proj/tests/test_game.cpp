#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aaqs/game.hpp"
#include "aaqs/numeric.hpp"

using namespace aaqs;

TEST_CASE("log loss values and floor") {
    LossFunction log = LossFunction::from_key("log");
    DecisionVector half{0.5, 0.5};
    CHECK(log(0, half) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log(1, half) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    DecisionVector sure{1.0, 0.0};
    CHECK(log(0, sure) == 0.0);
    CHECK(log(1, sure) == kInf);

    DecisionVector below{1e-301, 1.0};
    CHECK(log(0, below) == kInf);
    DecisionVector above{1e-299, 1.0};
    CHECK(log(0, above) == doctest::Approx(-std::log(1e-299)).epsilon(1e-12));

    CHECK_THROWS_AS(log(2, half), std::invalid_argument);
    CHECK_THROWS_AS(log(-1, half), std::invalid_argument);
    CHECK_THROWS_AS(LossFunction::from_key("hinge"), std::invalid_argument);
    CHECK_FALSE(LossFunction().valid());
}

TEST_CASE("brier loss values") {
    LossFunction brier = LossFunction::from_key("brier");
    DecisionVector half{0.5, 0.5};
    CHECK(brier(0, half) == 0.5);
    DecisionVector sure{1.0, 0.0};
    CHECK(brier(0, sure) == 0.0);
    CHECK(brier(1, sure) == 2.0);

    DecisionVector tri{0.2, 0.3, 0.5};
    // (0.2-1)^2 + 0.3^2 + 0.5^2
    CHECK(brier(0, tri) == doctest::Approx(0.98).epsilon(1e-15));
}

TEST_CASE("composed loss is u after the base loss") {
    Generator sq = Generator::from_key("square");
    LossFunction log = LossFunction::from_key("log");
    LossFunction comp = LossFunction::composed(sq, log);
    CHECK(comp.key() == "composed:square:log");

    DecisionVector half{0.5, 0.5};
    double l2 = std::log(2.0);
    CHECK(comp(0, half) == doctest::Approx(l2 * l2).epsilon(1e-15));
    DecisionVector sure{1.0, 0.0};
    CHECK(comp(1, sure) == kInf);

    CHECK_THROWS_AS(LossFunction::composed(sq, LossFunction()), std::invalid_argument);
}

TEST_CASE("simplex grid enumerates interior compositions") {
    DecisionGrid g = DecisionGrid::simplex(2, 4);
    REQUIRE(g.points.size() == 3);
    CHECK(g.points[0] == DecisionVector{0.25, 0.75});
    CHECK(g.points[1] == DecisionVector{0.5, 0.5});
    CHECK(g.points[2] == DecisionVector{0.75, 0.25});

    DecisionGrid b = DecisionGrid::binary(4);
    CHECK(b.points == g.points);

    DecisionGrid t = DecisionGrid::simplex(3, 4);
    REQUIRE(t.points.size() == 3);
    CHECK(t.points[0] == DecisionVector{0.25, 0.25, 0.5});
    CHECK(t.points[1] == DecisionVector{0.25, 0.5, 0.25});
    CHECK(t.points[2] == DecisionVector{0.5, 0.25, 0.25});

    // C(steps-1, m-1) interior points, each on the simplex
    DecisionGrid q = DecisionGrid::simplex(4, 6);
    CHECK(q.points.size() == 10);
    for (const DecisionVector& p : q.points) {
        double s = 0.0;
        for (double x : p) {
            CHECK(x > 0.0);
            s += x;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(DecisionGrid::simplex(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(DecisionGrid::simplex(3, 2), std::invalid_argument);
}

TEST_CASE("binary grid ordering matches k/R") {
    DecisionGrid b = DecisionGrid::binary(1000);
    REQUIRE(b.points.size() == 999);
    CHECK(b.points[0][0] == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(b.points[565][0] == doctest::Approx(0.566).epsilon(1e-15));
    CHECK(b.points[998][0] == doctest::Approx(0.999).epsilon(1e-15));
}

TEST_CASE("spec validation") {
    PredictionGameSpec spec;
    spec.profile = make_profile(Generator::from_key("sum"), 1.0);
    spec.loss = LossFunction::from_key("log");
    spec.num_outcomes = 2;
    spec.num_experts = 3;
    CHECK_NOTHROW(spec.validate());

    PredictionGameSpec bad = spec;
    bad.num_experts = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.num_outcomes = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.loss = LossFunction();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_NOTHROW(spec.validate_decision({0.6, 0.4}));
    CHECK_THROWS_AS(spec.validate_decision({0.7, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(spec.validate_decision({-0.1, 1.1}), std::invalid_argument);
    CHECK_THROWS_AS(spec.validate_decision({0.2, 0.3, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(spec.validate_decision({0.5}), std::invalid_argument);
}
