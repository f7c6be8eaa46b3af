#include <random>

#include "doctest.h"
#include "pdm/core.hpp"
#include "pdm/error.hpp"
#include "support.hpp"

using namespace pdm;

TEST_SUITE("core") {

TEST_CASE("build_system validates families") {
    SUBCASE("ML1 with two coordinates") {
        const PdmSystem s = test::ml1(1.0, Branch::Plus, {1.0, 2.0});
        CHECK(s.n() == 2);
        CHECK(s.kind() == Kind::TypeI);
        CHECK(s.profiles().size() == 2);
        CHECK(s.rest_mass == 1.0);
    }
    SUBCASE("ML1 minus branch has a bounded domain") {
        const PdmSystem s = test::ml1(1.0, Branch::Minus);
        CHECK(s.profile(0).domain() == Interval{-1.0, 1.0});
    }
    SUBCASE("power law with upsilon = -1") {
        auto p = test::omega({1.0});
        p.upsilon = -1.0;
        p.alpha = 1.0;
        try {
            build_system(test::catalog(Family::PowerLaw, p));
            FAIL("expected InvalidParameter");
        } catch (const ParameterError& e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
            CHECK(e.field() == "upsilon");
        }
    }
    SUBCASE("missing omega names the field") {
        ParameterSet p;
        p.lambda = 1.0;
        try {
            build_system(test::catalog(Family::ML1, p));
            FAIL("expected MissingParameter");
        } catch (const ParameterError& e) {
            CHECK(e.kind() == ErrorKind::MissingParameter);
            CHECK(e.field() == "omega");
        }
    }
    SUBCASE("n = 0") {
        auto d = test::catalog(Family::HarmonicReference, test::omega({}), 0);
        try {
            build_system(d);
            FAIL("expected InvalidParameter");
        } catch (const ParameterError& e) {
            CHECK(e.field() == "n");
        }
    }
    SUBCASE("eta_exp = 1 and non-positive scales") {
        auto p = test::omega({1.0});
        p.eta_exp = 1.0;
        p.beta = 1.0;
        p.kappa = std::vector<double>{1.0};
        CHECK_THROWS_AS(build_system(test::catalog(Family::SW2, p)), ParameterError);
        p.eta_exp = -1.0;
        p.kappa = std::vector<double>{-1.0};
        CHECK_THROWS_AS(build_system(test::catalog(Family::SW2, p)), ParameterError);
        p.kappa = std::vector<double>{1.0};
        p.omega = std::vector<double>{0.0};
        CHECK_THROWS_AS(build_system(test::catalog(Family::SW2, p)), ParameterError);
    }
    SUBCASE("omega length must match n") {
        auto p = test::omega({1.0});
        p.lambda = 1.0;
        CHECK_THROWS_AS(build_system(test::catalog(Family::ML1, p, 2)), ParameterError);
    }
}

TEST_CASE("kinetic energy") {
    const PdmSystem ml = test::ml1(1.0, Branch::Plus);
    CHECK(kinetic_energy(ml, State{0.0, {1.0}, {2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kinetic_energy(ml, State{0.0, {0.3}, {0.0}}) == 0.0);

    SystemDescription d;
    d.kind = Kind::TypeII;
    d.n = 2;
    d.coupled_mass = "1 + x1^2 + x2^2";
    d.potential = {"0"};
    const PdmSystem coupled = build_system(d);
    CHECK(kinetic_energy(coupled, State{0.0, {1.0, 0.0}, {1.0, 1.0}}) == doctest::Approx(2.0).epsilon(1e-15));

    const PdmSystem minus = test::ml1(1.0, Branch::Minus);
    CHECK_THROWS_AS(kinetic_energy(minus, State{0.0, {1.5}, {1.0}}), DomainViolation);
}

TEST_CASE("potential energy") {
    const PdmSystem ml = test::ml1(1.0, Branch::Plus);
    const double one[] = {1.0}, zero[] = {0.0};
    CHECK(potential_energy(ml, one) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(potential_energy(ml, zero) == 0.0);

    auto p = test::omega({1.0});
    p.lambda = 1.0;
    p.kappa = std::vector<double>{1.0};
    const PdmSystem sw1 = build_system(test::catalog(Family::SW1, p));
    CHECK(potential_energy(sw1, one) == doctest::Approx(1.25).epsilon(1e-15));
    try {
        potential_energy(sw1, zero);
        FAIL("expected SingularPoint");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularPoint);
    }
}

TEST_CASE("total energy") {
    const PdmSystem ml = test::ml1(1.0, Branch::Plus);
    const EnergyBreakdown e = total_energy(ml, State{0.0, {1.0}, {0.0}});
    CHECK(e.kinetic == 0.0);
    CHECK(e.potential == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.total == e.kinetic + e.potential);

    auto p = test::omega({1.0});
    p.zeta = std::vector<double>{1.0};
    const PdmSystem morse = build_system(test::catalog(Family::Morse, p));
    const EnergyBreakdown m = total_energy(morse, State{0.0, {0.0}, {1.0}});
    CHECK(m.kinetic == doctest::Approx(0.5));
    CHECK(m.potential == 0.0);
    CHECK(m.total == doctest::Approx(0.5));

    CHECK(total_energy(ml, State{0.0, {0.0}, {0.0}}).total == 0.0);
}

TEST_CASE("kinetic energy is non-negative and type II matches type I at n = 1") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(-0.95, 0.95), vs(-3.0, 3.0);
    const PdmSystem minus = test::ml1(1.0, Branch::Minus);

    SystemDescription one;
    one.mass = {"1/(1 - x^2)"};
    one.mass_domain = Interval{-1.0, 1.0};
    one.potential = {"0.5*x^2/(1 - x^2)"};
    SystemDescription two;
    two.kind = Kind::TypeII;
    two.coupled_mass = "1/(1 - x1^2)";
    two.potential = {"0.5*x1^2/(1 - x1^2)"};
    const PdmSystem s1 = build_system(one);
    const PdmSystem s2 = build_system(two);
    for (int k = 0; k < 1000; ++k) {
        const State st{0.0, {xs(rng)}, {vs(rng)}};
        CHECK(kinetic_energy(minus, st) >= 0.0);
        const auto e1 = total_energy(s1, st);
        const auto e2 = total_energy(s2, st);
        CHECK(e1.kinetic == doctest::Approx(e2.kinetic).epsilon(1e-14));
        CHECK(e1.potential == doctest::Approx(e2.potential).epsilon(1e-14));
        CHECK(e1.total == doctest::Approx(total_energy(minus, st).total).epsilon(1e-13));
    }
}

TEST_CASE("family names round-trip") {
    for (Family f : {Family::HarmonicReference, Family::IsotonicReference, Family::ML1, Family::PowerLaw, Family::ML2,
                     Family::Morse, Family::SW1, Family::SW2, Family::Custom})
        CHECK(family_from_string(to_string(f)) == f);
    CHECK(family_from_string("ML-1") == Family::ML1);
    CHECK_FALSE(family_from_string("quartic").has_value());
}

}
