#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aaqs/aggregation.hpp"
#include "aaqs/numeric.hpp"

using namespace aaqs;

namespace {
const char* kCatalog[] = {"sum", "sqrt", "square", "pow10", "focal", "pow:3"};
}

TEST_CASE("numeric helpers") {
    std::vector<double> v{std::log(0.2), std::log(0.3)};
    CHECK(log_sum_exp(v) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    std::vector<double> allneg{-kInf, -kInf};
    CHECK(log_sum_exp(allneg) == -kInf);
    CHECK(log_sum_exp(std::vector<double>{}) == -kInf);

    std::vector<double> k{1e16, 1.0, 1.0};
    CHECK(kahan_sum(k) == 10000000000000002.0);
    std::vector<double> withinf{1.0, kInf, 2.0};
    CHECK(kahan_sum(withinf) == kInf);

    CHECK(format17(0.1) == "0.10000000000000001");
    CHECK(format17(kInf) == "inf");
    CHECK(format17(-kInf) == "-inf");
    for (double x : {0.1, 1.0 / 3.0, 1e300, 5e-324, 0.0, 123456.789})
        CHECK(parse_double(format17(x)) == x);
    CHECK_THROWS_AS(parse_double("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
}

TEST_CASE("generator catalog and keys") {
    for (const char* key : kCatalog) {
        Generator g = Generator::from_key(key);
        CHECK(g.key() == key);
        CHECK(g.u(0.0) == 0.0);
        CHECK(g.u(kInf) == kInf);
        // strictly increasing on a few points
        double prev = 0.0;
        for (double x : {0.01, 0.5, 1.0, 2.0, 7.5}) {
            double ux = g.u(x);
            CHECK(ux > prev);
            prev = ux;
        }
        CHECK_THROWS_AS(g.u(-0.5), std::domain_error);
        CHECK_THROWS_AS(g.u(std::nan("")), std::domain_error);
    }
    Generator p = Generator::from_key("pow:2.5");
    CHECK(p.param() == 2.5);
    CHECK(p.key() == "pow:2.5");
    CHECK_THROWS_AS(Generator::from_key("pow:0"), std::invalid_argument);
    CHECK_THROWS_AS(Generator::from_key("pow:-1"), std::invalid_argument);
    CHECK_THROWS_AS(Generator::from_key("pow:abc"), std::invalid_argument);
    CHECK_THROWS_AS(Generator::from_key("bogus"), std::invalid_argument);
}

TEST_CASE("generator point values") {
    CHECK(Generator::from_key("pow10").u(1.5) == 57.6650390625);
    CHECK(Generator::from_key("square").u(3.0) == 9.0);
    CHECK(Generator::from_key("sqrt").u(9.0) == 3.0);
    CHECK(Generator::from_key("focal").u(2.0) ==
          doctest::Approx(1.4952901448310176).epsilon(1e-15));
    CHECK(Generator::from_key("focal").u(0.5) ==
          doctest::Approx(0.07740906087308774).epsilon(1e-15));
}

TEST_CASE("u_inv inverts u") {
    for (const char* key : kCatalog) {
        Generator g = Generator::from_key(key);
        for (double x : {1e-6, 0.03, 0.5, 1.0, 2.0, 17.0}) {
            CHECK(g.u_inv(g.u(x)) == doctest::Approx(x).epsilon(1e-12));
        }
        CHECK(g.u_inv(0.0) == 0.0);
        CHECK(g.u_inv(kInf) == kInf);
        CHECK_THROWS_AS(g.u_inv(-1.0), std::domain_error);
    }
}

TEST_CASE("quasi-sum values") {
    Generator sum = Generator::from_key("sum");
    std::vector<double> v{1.0, 2.0, 3.0};
    QuasiSumResult r = sum.quasi_sum(v);
    CHECK(r.value == 6.0);
    CHECK(!r.overflow);

    // square generator: u_inv(25 + ln 2) with inputs 5 and sqrt(ln 2)
    Generator sq = Generator::from_key("square");
    std::vector<double> w{5.0, 0.8325546111576977};
    CHECK(sq.quasi_sum(w).value == doctest::Approx(5.0688408123120166).epsilon(1e-15));

    // singleton is the identity
    for (const char* key : kCatalog) {
        Generator g = Generator::from_key(key);
        for (double x : {0.0, 0.25, 1.0, 40.0}) {
            std::vector<double> one{x};
            CHECK(g.quasi_sum(one).value == doctest::Approx(x).epsilon(1e-12));
        }
    }
}

TEST_CASE("quasi-sum saturation and overflow flags") {
    Generator sum = Generator::from_key("sum");
    std::vector<double> withinf{1.0, kInf};
    QuasiSumResult r = sum.quasi_sum(withinf);
    CHECK(r.value == kInf);
    CHECK(!r.overflow);  // a genuine infinite loss, not a numeric overflow

    std::vector<double> capped{1e300};
    r = sum.quasi_sum(capped);
    CHECK(r.value == kInf);
    CHECK(r.overflow);

    std::vector<double> creeping{9e299, 2e299};
    r = sum.quasi_sum(creeping);
    CHECK(r.value == kInf);
    CHECK(r.overflow);

    Generator p10 = Generator::from_key("pow10");
    std::vector<double> big{0.1, 1.0, 50.0, 1e31};
    r = p10.quasi_sum(big);
    CHECK(r.value == kInf);
    CHECK(r.overflow);
    // 50 alone is fine: 50^10 ~ 9.8e16 stays far under the cap
    std::vector<double> fifty{50.0};
    CHECK(p10.quasi_sum(fifty).overflow == false);

    CHECK(sum.fold(kInf, 1.0).value == kInf);
}

TEST_CASE("weighting profile") {
    Generator sum = Generator::from_key("sum");
    WeightingProfile p = make_profile(sum, 1.0);
    CHECK(p.f(4.0) == doctest::Approx(0.01831563888873418).epsilon(1e-15));
    CHECK(p.log_f(4.0) == -4.0);
    CHECK(p.f(kInf) == 0.0);
    CHECK(p.log_f(kInf) == -kInf);

    // sqrt generator at eta = 2: g(1/3) = (ln(3)/2)^2
    WeightingProfile ps = make_profile(Generator::from_key("sqrt"), 2.0);
    CHECK(ps.g(1.0 / 3.0) == doctest::Approx(0.3017372402031455).epsilon(1e-14));

    CHECK(p.g(1.0) == 0.0);
    CHECK(p.g(0.0) == kInf);
    CHECK_THROWS_AS(p.g(1.5), std::domain_error);
    CHECK_THROWS_AS(make_profile(sum, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_profile(sum, -1.0), std::invalid_argument);

    // g inverts f, and f turns quasi-sums into products. The log-domain
    // path is exact to rounding; the probability-space roundtrip loses
    // ~eps/(eta*u) relative precision in u and saturates once f underflows,
    // so it is only checked at moderate exponents.
    for (const char* key : kCatalog) {
        Generator g = Generator::from_key(key);
        for (double eta : {0.5, 1.0, 2.0}) {
            WeightingProfile prof = make_profile(g, eta);
            for (double x : {0.1, 1.0, 5.0}) {
                double ux = g.u(x);
                CHECK(prof.u_of_g_from_log(prof.log_f(x)) ==
                      doctest::Approx(ux).epsilon(1e-14));
                double t = eta * ux;
                if (t >= 1e-4 && t <= 600.0)
                    CHECK(prof.g(prof.f(x)) == doctest::Approx(x).epsilon(1e-9));
                if (t > 745.2)  // exp(-t) underflows to zero
                    CHECK(prof.g(prof.f(x)) == kInf);
            }
            double x = 0.7, y = 2.3;
            std::vector<double> xy{x, y};
            double q = g.quasi_sum(xy).value;
            CHECK(prof.f(q) == doctest::Approx(prof.f(x) * prof.f(y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("axiom checks pass for the catalog") {
    for (const char* key : kCatalog) {
        Generator g = Generator::from_key(key);
        AxiomConfig cfg;
        cfg.random_triples = 2000;
        cfg.seed = 7;
        AxiomReport rep = check_axioms(g, cfg);
        INFO(key, ": ", rep.counterexample);
        CHECK(rep.continuity);
        CHECK(rep.monotonicity);
        CHECK(rep.associativity);
        CHECK(rep.loss_compatibility);
        bool is_power = std::string(key) != "focal";
        CHECK(rep.homogeneity == is_power);
    }
}

TEST_CASE("axiom checks flag overflow points and use the rest") {
    Generator p10 = Generator::from_key("pow10");
    AxiomConfig cfg;
    cfg.grid = {0.1, 1.0, 50.0, 1e31};
    AxiomReport rep = check_axioms(p10, cfg);
    CHECK(rep.overflow_seen);
    CHECK(rep.total_points == 4);
    CHECK(rep.evaluable_points == 3);
    CHECK(rep.all_axioms());

    AxiomConfig tiny;
    tiny.grid = {1e31, 2e31, 3e31};
    AxiomReport rep2 = check_axioms(p10, tiny);
    CHECK(!rep2.all_axioms());
    CHECK(rep2.evaluable_points == 0);
}

TEST_CASE("deterministic rng mappings") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
    Rng c(5);
    for (int i = 0; i < 1000; ++i) {
        double u = c.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(c.index(17) < 17);
    }
    CHECK_THROWS_AS(Rng(1).index(0), std::invalid_argument);
}
