#include <numbers>

#include "doctest.h"
#include "pdm/error.hpp"
#include "pdm/exact.hpp"
#include "pdm/integrate.hpp"
#include "support.hpp"

using namespace pdm;

namespace {

const AccelerationField harmonic = [](const State& s) { return std::vector<double>{-s.x[0]}; };

IntegratorOptions adaptive(double t_end) {
    IntegratorOptions o;
    o.t_end = t_end;
    return o;
}

IntegratorOptions fixed(double h, double t_end) {
    IntegratorOptions o;
    o.scheme = FixedRK4{h};
    o.t_end = t_end;
    return o;
}

}  // namespace

TEST_SUITE("integrate") {

TEST_CASE("rk4_step") {
    const State s0{0.0, {1.0}, {0.0}};
    const State s1 = rk4_step(harmonic, s0, 0.1);
    CHECK(std::fabs(s1.x[0] - std::cos(0.1)) < 1e-7);
    CHECK(std::fabs(s1.v[0] + std::sin(0.1)) < 1e-7);
    CHECK(s1.t == doctest::Approx(0.1));

    const State same = rk4_step(harmonic, s0, 0.0);
    CHECK(same.x == s0.x);
    CHECK(same.v == s0.v);

    const AccelerationField failing = [](const State& s) -> std::vector<double> {
        if (s.t > 0.0) throw DomainViolation(0, s.x[0], "outside");
        return {0.0};
    };
    CHECK_THROWS_AS(rk4_step(failing, s0, 0.1), DomainViolation);
}

TEST_CASE("options are validated") {
    CHECK_THROWS_AS(validate(fixed(0.0, 1.0)), ParameterError);
    CHECK_THROWS_AS(validate(fixed(-1.0, 1.0)), ParameterError);
    IntegratorOptions o = adaptive(1.0);
    std::get<AdaptiveEmbedded45>(o.scheme).rel_tol = 0.0;
    CHECK_THROWS_AS(validate(o), ParameterError);
    o = adaptive(1.0);
    std::get<AdaptiveEmbedded45>(o.scheme).h_min = 1.0;
    std::get<AdaptiveEmbedded45>(o.scheme).h_init = 0.1;
    CHECK_THROWS_AS(validate(o), ParameterError);
    CHECK_NOTHROW(validate(adaptive(1.0)));
}

TEST_CASE("ML1 returns to its start after one period") {
    const PdmSystem sys = test::ml1(1.0, Branch::Plus);
    const double T = 2 * std::numbers::pi * std::sqrt(2.0);
    const Trajectory tr = integrate(sys, State{0.0, {1.0}, {0.0}}, adaptive(T));
    REQUIRE(tr.termination.kind == Termination::Kind::Completed);
    CHECK(tr.samples.back().t == doctest::Approx(T).epsilon(1e-15));
    CHECK(std::fabs(tr.samples.back().x[0] - 1.0) < 1e-7);
    CHECK(std::fabs(tr.samples.back().v[0]) < 1e-7);
    CHECK(tr.stats.accepted > 0);
    for (std::size_t k = 1; k < tr.samples.size(); ++k) CHECK(tr.samples[k].t > tr.samples[k - 1].t);
}

TEST_CASE("Morse trajectory stays between its turning points") {
    auto p = test::omega({1.0});
    p.zeta = std::vector<double>{1.0};
    ExactSolutionSpec spec;
    spec.family = ExactFamily::Morse;
    spec.params = p;
    spec.amplitude = {0.5};
    const Trajectory tr = integrate(system_for(spec), exact_solution(spec, 0.0), adaptive(30.0));
    REQUIRE(tr.termination.kind == Termination::Kind::Completed);
    for (const State& s : tr.samples) {
        CHECK(s.x[0] >= std::log(0.5) - 1e-9);
        CHECK(s.x[0] <= std::log(1.5) + 1e-9);
    }
}

TEST_CASE("ML1 minus branch hits its domain edge") {
    const PdmSystem sys = test::ml1(1.0, Branch::Minus);
    const Trajectory tr = integrate(sys, State{0.0, {0.9999}, {1e8}}, adaptive(1.0));
    CHECK(tr.termination.kind == Termination::Kind::DomainViolation);
    CHECK(tr.samples.back().x[0] < 1.0);
    CHECK(tr.samples.back().x[0] > 0.9999);

    // the fixed-step scheme trips the stage guard instead
    const Trajectory rk = integrate(sys, State{0.0, {0.9999}, {10.0}}, fixed(1e-3, 1.0));
    CHECK(rk.termination.kind == Termination::Kind::DomainViolation);
}

TEST_CASE("dense output") {
    const Trajectory tr = integrate(harmonic, State{0.0, {1.0}, {0.0}}, adaptive(10.0));
    for (const State& s : tr.samples) {
        const State d = tr.at(s.t);
        CHECK(d.x[0] == doctest::Approx(s.x[0]).epsilon(1e-14));
    }
    double worst = 0.0;
    for (int k = 0; k < 997; ++k) {
        const double t = 10.0 * (k + 0.5) / 997;
        worst = std::max(worst, std::fabs(tr.at(t).x[0] - std::cos(t)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("estimate_period") {
    SUBCASE("known signal") {
        Trajectory tr;
        for (int k = 0; k <= 4000; ++k) {
            const double t = 20.0 * k / 4000;
            tr.samples.push_back(State{t, {std::cos(2 * t)}, {-2 * std::sin(2 * t)}});
            tr.accelerations.push_back({-4 * std::cos(2 * t)});
        }
        CHECK(estimate_period(tr, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-6));
    }
    SUBCASE("ML1 corrected period") {
        const PdmSystem sys = test::ml1(1.0, Branch::Plus);
        const Trajectory tr = integrate(sys, State{0.0, {1.0}, {0.0}}, adaptive(60.0));
        CHECK(estimate_period(tr, 0) == doctest::Approx(2 * std::numbers::pi * std::sqrt(2.0)).epsilon(1e-8));
    }
    SUBCASE("monotone trajectory") {
        const AccelerationField free = [](const State&) { return std::vector<double>{0.0}; };
        const Trajectory tr = integrate(free, State{0.0, {0.0}, {1.0}}, adaptive(10.0));
        try {
            estimate_period(tr, 0);
            FAIL("expected NoPeriod");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NoPeriod);
        }
    }
}

TEST_CASE("RK4 error falls by about 16 per halving") {
    const double T = 20 * std::numbers::pi;
    auto error = [&](double h) {
        const Trajectory tr = integrate(harmonic, State{0.0, {1.0}, {0.0}}, fixed(h, T));
        const State& s = tr.samples.back();
        return std::hypot(s.x[0] - std::cos(T), s.v[0] + std::sin(T));
    };
    const double factor = error(0.1) / error(0.05);
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
}

TEST_CASE("adaptive and fixed-step runs agree") {
    const double T = 20 * std::numbers::pi;
    const Trajectory a = integrate(harmonic, State{0.0, {1.0}, {0.0}}, adaptive(T));
    const Trajectory f = integrate(harmonic, State{0.0, {1.0}, {0.0}}, fixed(1e-3, T));
    CHECK(std::fabs(a.samples.back().x[0] - f.samples.back().x[0]) < 10 * 1e-10);

    const PdmSystem sys = test::ml1(1.0, Branch::Plus);
    const double Tm = 10 * 2 * std::numbers::pi * std::sqrt(2.0);
    const Trajectory am = integrate(sys, State{0.0, {1.0}, {0.0}}, adaptive(Tm));
    const Trajectory fm = integrate(sys, State{0.0, {1.0}, {0.0}}, fixed(1e-3, Tm));
    CHECK(std::fabs(am.samples.back().x[0] - fm.samples.back().x[0]) < 10 * 1e-10);
}

TEST_CASE("runs are deterministic") {
    const PdmSystem sys = test::ml1(0.5, Branch::Minus);
    const Trajectory a = integrate(sys, State{0.0, {0.8}, {0.0}}, adaptive(20.0));
    const Trajectory b = integrate(sys, State{0.0, {0.8}, {0.0}}, adaptive(20.0));
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(a.samples[k].t == b.samples[k].t);
        CHECK(a.samples[k].x == b.samples[k].x);
    }
}

TEST_CASE("regularized integration passes through the power-law singularity") {
    ExactSolutionSpec spec;
    spec.family = ExactFamily::PowerLaw;
    spec.params = test::omega({1.0});
    spec.params.upsilon = 1.0;
    spec.params.alpha = 1.0;
    spec.amplitude = {1.0};
    const PdmSystem sys = system_for(spec);
    const double T = exact_period(spec);
    const Trajectory tr = integrate_regularized(sys, exact_solution(spec, 0.0), AdaptiveEmbedded45{}, 3 * T);
    REQUIRE(tr.termination.kind == Termination::Kind::Completed);
    bool negative = false;
    for (const State& s : tr.samples) negative = negative || s.x[0] < -0.5;
    CHECK(negative);
    CHECK(estimate_period(tr, 0) == doctest::Approx(T).epsilon(1e-6));
    // the plain adaptive scheme stops at x = 0
    const Trajectory plain = integrate(sys, exact_solution(spec, 0.0), adaptive(3 * T));
    CHECK(plain.termination.kind != Termination::Kind::Completed);
}

}
