#include <numbers>

#include "doctest.h"
#include "pdm/error.hpp"
#include "pdm/exact.hpp"
#include "pdm/integrate.hpp"
#include "pdm/transform.hpp"
#include "support.hpp"

using namespace pdm;

namespace {

NonlocalMap map_of(MapKind kind, MassProfile profile, ParameterSet p = {}) {
    NonlocalMap m;
    m.kind = kind;
    m.profiles = {std::move(profile)};
    m.params = std::move(p);
    return m;
}

const MassProfile ml_plus = profile::MathewsLakshmanan{1.0, Branch::Plus};

ParameterSet zeta(double z) {
    ParameterSet p;
    p.zeta = std::vector<double>{z};
    return p;
}

Trajectory run(const PdmSystem& sys, const State& s0, double t_end) {
    IntegratorOptions o;
    o.t_end = t_end;
    return integrate(sys, s0, o);
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("q_map examples") {
    CHECK(q_map(map_of(MapKind::OscillatorMap, ml_plus), 0, 1.0).q == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(q_map(map_of(MapKind::MorseMap, profile::Exponential{1.0}, zeta(1.0)), 0, 0.0).q == 0.0);
    ParameterSet eta;
    eta.eta_const = std::vector<double>{2.0};
    CHECK(q_map(map_of(MapKind::ConstantMap, ml_plus, eta), 0, 1.0).q == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(q_map(map_of(MapKind::OscillatorMap, profile::MathewsLakshmanan{1.0, Branch::Minus}), 0, 1.5),
                    DomainViolation);
}

TEST_CASE("f_scale examples") {
    CHECK(f_scale(map_of(MapKind::OscillatorMap, ml_plus), 0, 1.0) == doctest::Approx(0.5));
    const auto power = map_of(MapKind::OscillatorMap, profile::PowerLaw{1.0, 2.0});
    for (double x : {0.3, 1.0, 2.7}) CHECK(f_scale(power, 0, x) == doctest::Approx(3.0));
    const auto morse = map_of(MapKind::MorseMap, profile::Exponential{1.0}, zeta(1.0));
    for (double x : {-1.0, 0.0, 2.0}) CHECK(f_scale(morse, 0, x) == doctest::Approx(1.0));
}

TEST_CASE("g equals m f squared") {
    const std::vector<NonlocalMap> maps = {
        map_of(MapKind::OscillatorMap, ml_plus),
        map_of(MapKind::OscillatorMap, profile::PowerLaw{1.5, 0.5}),
        map_of(MapKind::MorseMap, profile::Exponential{0.7}, zeta(0.7)),
        map_of(MapKind::IsotonicMap, profile::IsotonicPowerLaw{1.2, 2.0}),
    };
    for (const auto& m : maps)
        for (double x : {0.2, 0.9, 1.7}) {
            const double mass = m.profiles[0].eval(x).m;
            const double f = f_scale(m, 0, x);
            CHECK(test::rel(g_metric(m, 0, x), mass * f * f) < 1e-12);
            CHECK(test::rel(g_metric(m, 0, x), std::pow(q_map(m, 0, x).dq_dx, 2)) < 1e-12);
        }
}

TEST_CASE("tau for constant f") {
    auto p = test::omega({1.0});
    p.zeta = std::vector<double>{2.0};
    const PdmSystem sys = build_system(test::catalog(Family::Morse, p));
    const Trajectory tr = run(sys, State{0.0, {0.1}, {0.0}}, 5.0);
    const auto tau = tau_accumulate(map_for(sys), tr, 0);
    for (std::size_t k = 0; k < tau.size(); ++k) CHECK(tau[k] == doctest::Approx(2 * tr.samples[k].t).epsilon(1e-12));
}

TEST_CASE("ML1 maps onto the unit harmonic oscillator") {
    const PdmSystem sys = test::ml1(1.0, Branch::Plus);
    const double T = 2 * std::numbers::pi * std::sqrt(2.0);
    const Trajectory tr = run(sys, State{0.0, {1.0}, {0.0}}, 3 * T);
    const NonlocalMap map = map_for(sys);
    const auto ref = map_to_reference(map, tr);
    REQUIRE(ref.t.size() == tr.samples.size());
    for (std::size_t k = 1; k < ref.t.size(); ++k) CHECK(ref.tau[k][0] > ref.tau[k - 1][0]);
    CHECK(ref.tau.back()[0] == doctest::Approx(3 * 2 * std::numbers::pi).epsilon(1e-8));
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.t.size(); ++k) {
        const double q = ref.q[k][0];
        worst = std::max(worst, std::fabs(q - std::cos(ref.tau[k][0]) / std::sqrt(2.0)));
        CHECK(q * q + ref.q_tilde[k][0] * ref.q_tilde[k][0] == doctest::Approx(0.5).epsilon(1e-8));
    }
    CHECK(worst < 1e-7);

    const ReferenceSystem harmonic = reference_for(sys);
    for (std::size_t k = 0; k < tr.samples.size(); k += 17) {
        const auto r = invariance_residual(map, harmonic, tr.samples[k], tr.accelerations[k]);
        CHECK(std::fabs(r[0]) < 1e-6);
    }
}

TEST_CASE("constant mass gives the identity map") {
    const PdmSystem sys = build_system(test::catalog(Family::HarmonicReference, test::omega({1.5})));
    const Trajectory tr = run(sys, State{0.0, {0.4}, {0.2}}, 4.0);
    const auto ref = map_to_reference(map_for(sys), tr);
    for (std::size_t k = 0; k < ref.t.size(); ++k) {
        CHECK(ref.q[k][0] == doctest::Approx(tr.samples[k].x[0]));
        CHECK(ref.q_tilde[k][0] == doctest::Approx(tr.samples[k].v[0]));
        CHECK(ref.tau[k][0] == doctest::Approx(tr.samples[k].t));
    }
}

TEST_CASE("a sign change of f is rejected") {
    auto p = test::omega({1.0});
    p.lambda = 0.5;
    p.sign = Branch::Minus;
    p.eta_const = std::vector<double>{1.0};
    const PdmSystem sys = build_system(test::catalog(Family::ML2, p));
    // f = η m'/2m vanishes at x = 0, which the orbit crosses
    const Trajectory tr = run(sys, State{0.0, {0.5}, {0.0}}, 10.0);
    try {
        tau_accumulate(map_for(sys), tr, 0);
        FAIL("expected NonPositiveScale");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonPositiveScale);
    }
}

TEST_CASE("potential match") {
    const PdmSystem ml = test::ml1(1.0, Branch::Plus, {1.3});
    for (double x : {-2.0, -0.4, 0.0, 0.8, 3.0}) {
        const double xs[] = {x};
        CHECK(potential_match_residual(map_for(ml), ml, reference_for(ml), xs) < 1e-13);
    }
    auto p = test::omega({1.0});
    p.zeta = std::vector<double>{1.0};
    const PdmSystem morse = build_system(test::catalog(Family::Morse, p));
    const double one[] = {1.0};
    CHECK(potential_match_residual(map_for(morse), morse, reference_for(morse), one) < 1e-13);

    const ReferenceSystem doubled = ReferenceSystem::harmonic({2.6});
    const double x[] = {0.8};
    CHECK(potential_match_residual(map_for(ml), ml, doubled, x) > 0.0);
}

TEST_CASE("el2 obstruction") {
    SystemDescription d;
    d.n = 2;
    d.kind = Kind::TypeII;
    d.coupled_mass = "1 + x1^2 + x2^2";
    d.potential = {"0"};
    const PdmSystem sys = build_system(d);
    CHECK(el2_obstruction(sys, State{0.0, {1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(0.5));

    d.coupled_mass = "3";
    CHECK(el2_obstruction(build_system(d), State{0.0, {1.0, 0.2}, {0.7, 1.0}}) == 0.0);
}

TEST_CASE("inverse map") {
    const auto map = map_of(MapKind::OscillatorMap, ml_plus);
    for (double x : {-3.0, -0.5, 0.0, 0.25, 2.0}) {
        const double q = q_map(map, 0, x).q;
        CHECK(inverse_q_map(map, 0, q, -5.0, 5.0) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inverse_q_map(map, 0, 0.99999, -5.0, 5.0), DomainViolation);
}

TEST_CASE("custom systems have no catalog map") {
    SystemDescription d;
    d.mass = {"1 + x^2"};
    d.potential = {"x^2"};
    const PdmSystem sys = build_system(d);
    try {
        map_for(sys);
        FAIL("expected UnsupportedFamily");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedFamily);
    }
}

}
